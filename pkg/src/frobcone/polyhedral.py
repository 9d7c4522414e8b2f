"""Exact rational polyhedral geometry.

Cones carry a V-representation (generators), an H-representation
(inequality normals ``h`` meaning ``h @ x >= 0``), or both. Conversion
enumerates tight subsystems exactly; that is only sensible for the small
dimensions this package works in, which is all it is used for.

Half-open convention, used everywhere: a constraint ``(f, lo, hi)`` means
``lo < f(t) <= hi``, matching ``ceil(x) == s  <=>  s - 1 < x <= s``.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, ResourceGuardExceeded, ValidationError
from .exact import as_rat, det_exact, dot, lcm_denominators, nullspace, primitive_vector, rank, solve_exact
from .lp import OPTIMAL, feasible_combination, solve_standard

DEFAULT_MAX_POINTS = 10**8

Vector = tuple[Fraction, ...]


def max_points_default(fallback: int = DEFAULT_MAX_POINTS) -> int:
    env = os.environ.get("FROBCONE_MAX_POINTS")
    return int(env) if env else fallback


def _vec(v) -> Vector:
    return tuple(as_rat(x) for x in v)


@dataclass(frozen=True)
class RationalCone:
    dim: int
    generators: tuple[Vector, ...] = ()
    inequalities: tuple[Vector, ...] = ()
    has_generators: bool = True
    has_inequalities: bool = False

    @classmethod
    def from_generators(cls, dim, gens) -> "RationalCone":
        gens = tuple(_vec(g) for g in gens)
        if any(len(g) != dim for g in gens):
            raise DimensionMismatch("generator length differs from ambient dimension")
        return cls(dim, gens, (), True, False)

    @classmethod
    def from_inequalities(cls, dim, ineqs) -> "RationalCone":
        ineqs = tuple(_vec(h) for h in ineqs)
        if any(len(h) != dim for h in ineqs):
            raise DimensionMismatch("inequality length differs from ambient dimension")
        return cls(dim, (), ineqs, False, True)

    @classmethod
    def orthant(cls, dim) -> "RationalCone":
        return cls.from_generators(dim, [[int(i == j) for j in range(dim)] for i in range(dim)])

    def contains_generators_check(self) -> bool:
        return all(dot(h, g) >= 0 for h in self.inequalities for g in self.generators)


def extreme_rays(rows: Sequence[Sequence], dim: int) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Generators of ``{x : rows @ x >= 0}``.

    Returns ``(rays, lineality)``: primitive extreme rays of the cone
    intersected with the orthogonal complement of its lineality space, and
    a primitive basis of that lineality space. The cone equals
    ``cone(rays) + span(lineality)``.
    """
    rows = [_vec(r) for r in rows]
    lineality = nullspace(rows, dim) if rows else nullspace([], dim)
    eq = [tuple(Fraction(x) for x in l) for l in lineality]
    need = dim - 1 - len(eq)
    rays = set()
    if need >= 0 and rows:
        for subset in itertools.combinations(range(len(rows)), need):
            system = [rows[i] for i in subset] + eq
            if system and rank(system) != dim - 1:
                continue
            kern = nullspace(system, dim)
            if len(kern) != 1:
                continue
            r = kern[0]
            vals = [dot(row, r) for row in rows]
            if all(v >= 0 for v in vals):
                rays.add(r)
            elif all(v <= 0 for v in vals):
                rays.add(tuple(-x for x in r))
    rays = sorted(rays, reverse=True)
    return rays, sorted(lineality, reverse=True)


def dualize(cone: RationalCone) -> RationalCone:
    """Return the cone with both representations, canonicalised.

    Inequalities are irredundant (facet normals plus both signs of each
    equation of the linear span), generators are extreme rays plus both
    signs of each lineality direction. Vectors are primitive integral and
    sorted in decreasing lexicographic order.
    """
    n = cone.dim
    if n <= 0:
        raise ValidationError("zero-dimensional ambient space")
    if cone.has_generators:
        gens = [g for g in cone.generators if any(g)]
    else:
        rays, lin = extreme_rays(cone.inequalities, n)
        gens = rays + lin + [tuple(-x for x in l) for l in lin]
    rays, lin = extreme_rays(gens, n)
    ineqs = rays + lin + [tuple(-x for x in l) for l in lin]
    # recompute generators from the irredundant H-rep for a canonical V-rep
    grays, glin = extreme_rays(ineqs, n)
    gens = grays + glin + [tuple(-x for x in l) for l in glin]
    return RationalCone(
        n,
        tuple(sorted((_vec(g) for g in gens), reverse=True)),
        tuple(sorted((_vec(h) for h in ineqs), reverse=True)),
        True,
        True,
    )


@dataclass(frozen=True)
class MembershipCertificate:
    verdict: str  # "inside", "interior" or "outside"
    query: Vector
    generators: tuple[Vector, ...]
    coefficients: Optional[tuple[Fraction, ...]] = None
    functional: Optional[Vector] = None

    @property
    def is_member(self) -> bool:
        return self.verdict in ("inside", "interior")

    def verify(self) -> bool:
        """Re-check the witness from scratch."""
        if self.is_member:
            if self.coefficients is None or len(self.coefficients) != len(self.generators):
                return False
            if any(c < 0 for c in self.coefficients):
                return False
            combo = tuple(
                sum((c * g[i] for c, g in zip(self.coefficients, self.generators)), Fraction(0))
                for i in range(len(self.query))
            )
            if combo != self.query:
                return False
            if self.verdict == "interior":
                # strictly positive weights on a spanning set put v in the interior
                if not self.generators or rank(self.generators) != len(self.query):
                    return False
                return all(c > 0 for c in self.coefficients)
            return True
        if self.functional is None:
            return False
        return all(dot(self.functional, g) >= 0 for g in self.generators) and dot(self.functional, self.query) < 0


def _ensure_generators(cone: RationalCone) -> RationalCone:
    return cone if cone.has_generators else dualize(cone)


def member(cone: RationalCone, v) -> MembershipCertificate:
    """Exact membership test with a witness.

    Inside: nonnegative coefficients reproducing ``v`` from the generators.
    Outside: a functional nonnegative on every generator and negative on ``v``.
    """
    v = _vec(v)
    if len(v) != cone.dim:
        raise DimensionMismatch(f"vector has length {len(v)}, cone lives in dimension {cone.dim}")
    cone = _ensure_generators(cone)
    gens = cone.generators
    if not gens:
        if not any(v):
            return MembershipCertificate("inside", v, gens, coefficients=())
        # cone is {0}: the negated query separates
        z = tuple(-x for x in v)
        return MembershipCertificate("outside", v, gens, functional=z)
    res = feasible_combination(gens, v)
    if res.status == OPTIMAL:
        return MembershipCertificate("inside", v, gens, coefficients=tuple(res.x))
    z = primitive_vector([-y for y in res.farkas])
    return MembershipCertificate("outside", v, gens, functional=_vec(z))


def member_interior(cone: RationalCone, v) -> MembershipCertificate:
    """Like :func:`member`, upgrading the verdict to ``interior`` when ``v``
    lies in the interior of a full-dimensional cone.

    The interior witness is a representation with every coefficient
    strictly positive over a spanning generator set, found by maximising
    the smallest coefficient.
    """
    cert = member(cone, v)
    if not cert.is_member:
        return cert
    gens = cert.generators
    if not gens or rank(gens) != cone.dim:
        return cert
    k = len(gens)
    n = cone.dim
    # variables: lam' (k), t, slack;  G lam' + (sum G) t = v ;  t + slack = 1
    colsum = [sum(g[i] for g in gens) for i in range(n)]
    A = [[g[i] for g in gens] + [colsum[i], 0] for i in range(n)]
    A.append([0] * k + [1, 1])
    res = solve_standard([0] * k + [-1, 0], A, list(cert.query) + [1])
    if res.status == OPTIMAL and res.x[k] > 0:
        t = res.x[k]
        coeffs = tuple(x + t for x in res.x[:k])
        return MembershipCertificate("interior", cert.query, gens, coeffs)
    return cert


def interior_by_inequalities(cone: RationalCone, v) -> bool:
    """Interior test through the facet description (used for cross-checks)."""
    v = _vec(v)
    full = dualize(cone)
    if not full.generators or rank(full.generators) != cone.dim:
        return False
    return all(dot(h, v) > 0 for h in full.inequalities)


# ---------------------------------------------------------------------------
# Chambers and volumes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HalfOpenChamber:
    """``{t in [0,1)^d : lo_k < f_k(t) <= hi_k for all k}``; a bound of
    ``None`` is absent."""

    dim: int
    constraints: tuple[tuple[Vector, Optional[Fraction], Optional[Fraction]], ...] = ()

    def closed_halfspaces(self) -> list[tuple[Vector, Fraction]]:
        """Closure as ``(a, b)`` pairs meaning ``a @ t >= b``."""
        hs = []
        for k in range(self.dim):
            e = tuple(Fraction(int(i == k)) for i in range(self.dim))
            hs.append((e, Fraction(0)))
            hs.append((tuple(-x for x in e), Fraction(-1)))
        for f, lo, hi in self.constraints:
            f = _vec(f)
            if lo is not None:
                hs.append((f, as_rat(lo)))
            if hi is not None:
                hs.append((tuple(-x for x in f), -as_rat(hi)))
        return hs

    def contains(self, t) -> bool:
        t = _vec(t)
        if any(not (0 <= x < 1) for x in t):
            return False
        for f, lo, hi in self.constraints:
            val = dot(f, t)
            if lo is not None and not val > lo:
                return False
            if hi is not None and not val <= hi:
                return False
        return True


def polytope_vertices(halfspaces: Sequence[tuple[Vector, Fraction]], dim: int) -> list[Vector]:
    verts = set()
    for subset in itertools.combinations(range(len(halfspaces)), dim):
        A = [halfspaces[i][0] for i in subset]
        b = [halfspaces[i][1] for i in subset]
        x = solve_exact(A, b)
        if x is None:
            continue
        if all(dot(a, x) >= c for a, c in halfspaces):
            verts.add(tuple(x))
    return sorted(verts)


def _affine_rank(points) -> int:
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return rank([[a - b for a, b in zip(p, p0)] for p in points[1:]])


def _triangulate(verts, halfspaces, k):
    """Pulling triangulation of a k-dimensional face given by its vertices."""
    if k == 0:
        return [[verts[0]]]
    if len(verts) == k + 1:
        return [list(verts)]
    v0 = verts[0]
    out = []
    seen = set()
    for a, b in halfspaces:
        face = [v for v in verts if dot(a, v) == b]
        key = tuple(face)
        if not face or v0 in face or key in seen:
            continue
        if _affine_rank(face) != k - 1:
            continue
        seen.add(key)
        for simplex in _triangulate(face, halfspaces, k - 1):
            out.append([v0] + simplex)
    return out


def polytope_volume(halfspaces: Sequence[tuple[Vector, Fraction]], dim: int) -> Fraction:
    """Exact volume of the bounded polytope ``{a @ t >= b}``; 0 if degenerate."""
    verts = polytope_vertices(halfspaces, dim)
    if len(verts) < dim + 1 or _affine_rank(verts) < dim:
        return Fraction(0)
    total = Fraction(0)
    for simplex in _triangulate(verts, list(halfspaces), dim):
        p0 = simplex[0]
        total += abs(det_exact([[a - b for a, b in zip(p, p0)] for p in simplex[1:]]))
    return total / math.factorial(dim)


def chamber_volume(ch: HalfOpenChamber) -> Fraction:
    """Lebesgue volume of a half-open chamber (clipped to the unit box)."""
    return polytope_volume(ch.closed_halfspaces(), ch.dim)


# ---------------------------------------------------------------------------
# Lattice points
# ---------------------------------------------------------------------------


def integral_halfspace(normal, rhs) -> tuple[tuple[int, ...], int]:
    """Rescale ``normal @ x >= rhs`` to integer coefficients and round the
    right side up (valid for integer ``x``)."""
    normal = _vec(normal)
    rhs = as_rat(rhs)
    den = lcm_denominators(list(normal))
    ints = tuple(int(x * den) for x in normal)
    return ints, math.ceil(rhs * den)


def box_size(box: Sequence[tuple[int, int]]) -> int:
    n = 1
    for lo, hi in box:
        n *= max(0, hi - lo + 1)
    return n


def lattice_points(constraints, box, max_points: Optional[int] = None, threads: int = 1) -> list[tuple[int, ...]]:
    """All integer points of ``box`` satisfying every ``normal @ x >= rhs``.

    ``box`` is a list of inclusive ``(lo, hi)`` integer bounds. Output is
    sorted lexicographically regardless of ``threads``.
    """
    limit = max_points_default() if max_points is None else max_points
    size = box_size(box)
    if size > limit:
        raise ResourceGuardExceeded(size, limit, "lattice box")
    d = len(box)
    if size == 0:
        return []
    ints = [integral_halfspace(a, b) for a, b in constraints]
    if any(len(a) != d for a, _ in ints):
        raise DimensionMismatch("constraint length differs from box dimension")
    A = np.array([a for a, _ in ints], dtype=np.int64).reshape(len(ints), d)
    s = np.array([b for _, b in ints], dtype=np.int64)
    T = np.empty((0, len(ints)), dtype=np.int64)
    lo = [b[0] for b in box]
    hi = [b[1] for b in box]
    pts = _kernels.region_points(A, s, T, lo, hi, threads=threads)
    return [tuple(int(x) for x in p) for p in pts]
