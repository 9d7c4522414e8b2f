"""Frobenius direct images of normal toric rings ``R = k[C ∩ Z^d]``.

The cone is ``C = {v : A v >= 0}`` with primitive inner facet normals as
the rows of ``A``. Sign convention: the conic module of signature ``s`` is
``M_s = span{m : A m >= s}``; its divisor class is the class of ``-s`` in
``Cl(R) = coker(A)``; the canonical module is the signature ``(1, ..., 1)``.

For ``u`` in ``{0..q-1}^d`` the residue-``u`` summand of ``F^e_* M_s`` is
``M_sigma`` with ``sigma = ceil((s - A u) / q)``. Divisorial ideals are
isomorphic iff their classes agree, so classification is a group
computation.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np

from . import _kernels
from .errors import (
    DimensionMismatch,
    InvariantViolation,
    NonPrimitiveFacet,
    NotFullDim,
    NotPointed,
    NotPrimary,
    NotPrime,
    RedundantFacet,
    ResourceGuardExceeded,
    ValidationError,
)
from .exact import IntMatrix, rank, rref, snf
from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, maximize_free
from .polyhedral import (
    HalfOpenChamber,
    box_size,
    chamber_volume,
    extreme_rays,
    max_points_default,
)

DEFAULT_MAX_SHIFTS = 10**7

Signature = tuple[int, ...]


@dataclass(frozen=True)
class ToricRing:
    name: str
    p: int
    d: int
    facets: tuple[tuple[int, ...], ...]

    @classmethod
    def from_spec(cls, spec: Mapping) -> "ToricRing":
        """Build from the ring JSON object ``{"name", "p", "d", "facets"}``."""
        for key in ("p", "d", "facets"):
            if key not in spec:
                raise ValidationError(f"missing field {key!r}", field=key)
        try:
            p = int(spec["p"])
            d = int(spec["d"])
            facets = tuple(tuple(int(x) for x in row) for row in spec["facets"])
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"malformed ring specification: {exc}") from exc
        return cls(str(spec.get("name", "ring")), p, d, facets)

    def to_spec(self) -> dict:
        return {"name": self.name, "p": self.p, "d": self.d, "facets": [list(r) for r in self.facets]}

    @property
    def f(self) -> int:
        return len(self.facets)

    @property
    def A(self) -> np.ndarray:
        return np.array(self.facets, dtype=np.int64).reshape(self.f, self.d)

    def pair(self, m: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * x for a, x in zip(row, m)) for row in self.facets)

    def contains(self, m: Sequence[int]) -> bool:
        return all(v >= 0 for v in self.pair(m))

    @property
    def max_row_sum(self) -> int:
        return max(sum(abs(x) for x in row) for row in self.facets)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def validate(ring: ToricRing) -> ToricRing:
    """Check pointedness, full dimension, primitivity, irredundancy and
    primality of ``p``; return the ring unchanged when all hold."""
    if ring.d < 1:
        raise ValidationError("dimension must be positive", field="d")
    if not ring.facets:
        raise NotPointed("no facets: the cone is the whole space", field="facets")
    for i, row in enumerate(ring.facets):
        if len(row) != ring.d:
            raise DimensionMismatch(f"facet {i} has length {len(row)}, expected {ring.d}", field="facets")
        g = functools.reduce(math.gcd, row, 0)
        if g != 1:
            raise NonPrimitiveFacet(f"facet {i} = {list(row)} is not primitive (gcd {g})", field="facets")
    if rank(ring.facets) != ring.d:
        raise NotPointed("facet normals do not span: the cone contains a line", field="facets")
    # full dimension: some v with A v >= 1
    res = maximize_free([0] * ring.d, [[-x for x in row] for row in ring.facets], [-1] * ring.f)
    if res.status == INFEASIBLE:
        raise NotFullDim("cone has empty interior", field="facets")
    rays, _ = extreme_rays(ring.facets, ring.d)
    dual_rays, _ = extreme_rays(rays, ring.d)
    if sorted(dual_rays) != sorted(set(ring.facets)) or len(set(ring.facets)) != ring.f:
        raise RedundantFacet("facet list is not the irredundant set of facet normals", field="facets")
    if not _is_prime(ring.p):
        raise NotPrime(f"p = {ring.p} is not prime", field="p")
    return ring


# ---------------------------------------------------------------------------
# Class group
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClGroup:
    """``coker(Z^d -> Z^f, v -> A v)`` presented through Smith normal form.

    ``orders`` lists the cyclic factors of the element coordinates: an
    order ``n > 1`` is ``Z/n``, order ``0`` is a free ``Z`` summand.
    """

    orders: tuple[int, ...]
    positions: tuple[int, ...]  # which rows of U x carry each coordinate
    U: IntMatrix
    U_inv: IntMatrix

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(o for o in self.orders if o > 1)

    @property
    def free_rank(self) -> int:
        return sum(1 for o in self.orders if o == 0)

    @property
    def is_trivial(self) -> bool:
        return not self.orders

    def normalize(self, elem: Sequence[int]) -> tuple[int, ...]:
        return tuple(x % o if o else x for x, o in zip(elem, self.orders))

    def project(self, x: Sequence[int]) -> tuple[int, ...]:
        y = self.U.apply(x)
        return self.normalize([y[i] for i in self.positions])

    def add(self, a, b):
        return self.normalize([x + y for x, y in zip(a, b)])

    def sub(self, a, b):
        return self.normalize([x - y for x, y in zip(a, b)])

    def zero(self) -> tuple[int, ...]:
        return tuple(0 for _ in self.orders)

    def lift(self, elem: Sequence[int]) -> tuple[int, ...]:
        """Some ``x`` in ``Z^f`` with ``project(x) == elem``."""
        y = [0] * self.U.rows
        for pos, val in zip(self.positions, elem):
            y[pos] = val
        return self.U_inv.apply(y)

    def describe(self) -> str:
        parts = [f"Z/{o}" for o in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


def _int_inverse(M: IntMatrix) -> IntMatrix:
    n = M.rows
    aug = [row + [int(i == j) for j in range(n)] for i, row in enumerate(M.to_rows())]
    red, _ = rref(aug)
    inv = [[red[i][n + j] for j in range(n)] for i in range(n)]
    if any(x.denominator != 1 for r in inv for x in r):
        raise InvariantViolation("unimodular matrix has a non-integral inverse")
    return IntMatrix.from_rows([[int(x) for x in r] for r in inv])


@functools.lru_cache(maxsize=None)
def class_group(ring: ToricRing) -> ClGroup:
    A = IntMatrix.from_rows(ring.facets)
    res = snf(A)
    diag = res.diagonal
    orders, positions = [], []
    for i in range(ring.f):
        dii = diag[i] if i < len(diag) else 0
        if dii == 1:
            continue
        orders.append(dii)
        positions.append(i)
    return ClGroup(tuple(orders), tuple(positions), res.U, _int_inverse(res.U))


def class_element(ring: ToricRing, s: Sequence[int]) -> tuple[int, ...]:
    """Cl-class of the conic module of signature ``s`` (class of ``-s``)."""
    return class_group(ring).project([-x for x in s])


def canonical_element(ring: ToricRing) -> tuple[int, ...]:
    return class_element(ring, (1,) * ring.f)


@dataclass(frozen=True, order=True)
class ConicClass:
    """Isomorphism class of a conic module, keyed by its divisor class."""

    element: tuple[int, ...]
    signature: Signature = field(compare=False)
    is_free: bool = field(compare=False, default=False)
    is_canonical: bool = field(compare=False, default=False)
    orders: tuple[int, ...] = field(compare=False, default=())

    @property
    def label(self) -> str:
        if self.is_free:
            return "free"
        if len(self.element) == 1:
            k = self.element[0]
            return "c" if k == 1 else f"c^{k}"
        return "c^(" + ",".join(str(x) for x in self.element) + ")"


# ---------------------------------------------------------------------------
# Limit chambers
# ---------------------------------------------------------------------------


def _chamber_ranges(ring: ToricRing) -> list[range]:
    ranges = []
    for row in ring.facets:
        lo = -sum(max(a, 0) for a in row)
        hi = sum(max(-a, 0) for a in row)
        ranges.append(range(lo + 1, hi + 1))
    return ranges


@functools.lru_cache(maxsize=None)
def chamber_volumes(ring: ToricRing) -> tuple[tuple[Signature, Fraction], ...]:
    """Signatures ``sigma = ceil(-A t)`` over ``t`` in ``[0,1)^d`` with the
    exact volume of each region, positive volumes only, sorted by sigma."""
    out = []
    neg = [tuple(-a for a in row) for row in ring.facets]
    for sigma in itertools.product(*_chamber_ranges(ring)):
        ch = HalfOpenChamber(ring.d, tuple((neg[i], sigma[i] - 1, sigma[i]) for i in range(ring.f)))
        vol = chamber_volume(ch)
        if vol > 0:
            out.append((tuple(sigma), vol))
    total = sum(v for _, v in out)
    if total != 1:
        raise InvariantViolation(f"chamber volumes sum to {total}, not 1")
    return tuple(out)


@functools.lru_cache(maxsize=None)
def _representatives(ring: ToricRing) -> dict:
    reps = {}
    for sigma, _ in chamber_volumes(ring):
        elem = class_element(ring, sigma)
        if elem not in reps or sigma < reps[elem]:
            reps[elem] = sigma
    return reps


def classify(ring: ToricRing, s: Sequence[int]) -> ConicClass:
    """Map a signature to its conic class.

    The stored representative signature is the lexicographically smallest
    chamber signature in the class, or ``s`` itself for classes that no
    chamber realises.
    """
    s = tuple(int(x) for x in s)
    if len(s) != ring.f:
        raise ValidationError(f"signature has length {len(s)}, ring has {ring.f} facets")
    grp = class_group(ring)
    elem = class_element(ring, s)
    rep = _representatives(ring).get(elem, s)
    return ConicClass(elem, rep, elem == grp.zero(), elem == canonical_element(ring), grp.orders)


def class_from_element(ring: ToricRing, elem: Sequence[int]) -> ConicClass:
    x = class_group(ring).lift(elem)
    return classify(ring, tuple(-v for v in x))


def free_class(ring: ToricRing) -> ConicClass:
    return classify(ring, (0,) * ring.f)


def canonical_class(ring: ToricRing) -> ConicClass:
    return classify(ring, (1,) * ring.f)


@functools.lru_cache(maxsize=None)
def _limit_cached(ring: ToricRing) -> tuple:
    agg: dict[ConicClass, Fraction] = {}
    for sigma, vol in chamber_volumes(ring):
        c = classify(ring, sigma)
        agg[c] = agg.get(c, Fraction(0)) + vol
    return tuple(sorted(agg.items()))


def limit_multiplicities(ring: ToricRing, start: Optional[Sequence[int]] = None) -> dict[ConicClass, Fraction]:
    """Exact ``lim_e a_{e,c} / q^d`` per conic class.

    The start signature shifts every ceiling argument by ``s / q``, which
    vanishes in the limit, so ``start`` does not affect the result.
    """
    if start is not None and len(start) != ring.f:
        raise ValidationError("start signature length differs from facet count")
    return dict(_limit_cached(ring))


# ---------------------------------------------------------------------------
# Frobenius decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MultiplicityVector:
    e: int
    q: int
    start: Signature
    counts: dict  # ConicClass -> int, sorted by class
    signature_counts: dict  # Signature -> int, sorted

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def _decompose_limit(max_points: Optional[int]) -> int:
    return max_points_default(DEFAULT_MAX_SHIFTS) if max_points is None else max_points


def frobenius_decompose(
    ring: ToricRing,
    start: Optional[Sequence[int]] = None,
    e: int = 1,
    *,
    threads: int = 1,
    max_points: Optional[int] = None,
    backend: Optional[str] = None,
) -> MultiplicityVector:
    """Decompose ``F^e_*(M_start)`` into conic summands.

    Enumerates every residue ``u`` in ``{0..q-1}^d``; the summand for ``u``
    has signature ``ceil((start - A u) / q)``.
    """
    if e < 1:
        raise ValidationError("Frobenius exponent must be at least 1", field="e")
    s = (0,) * ring.f if start is None else tuple(int(x) for x in start)
    if len(s) != ring.f:
        raise ValidationError("start signature length differs from facet count", field="start")
    q = ring.p ** e
    n = q ** ring.d
    limit = _decompose_limit(max_points)
    if n > limit:
        raise ResourceGuardExceeded(n, limit, f"q^d for e={e}")
    lo, widths = [], []
    for row, si in zip(ring.facets, s):
        au_min = sum(min(a, 0) for a in row) * (q - 1)
        au_max = sum(max(a, 0) for a in row) * (q - 1)
        low = -((au_max - si) // q)  # ceil((si - au_max) / q)
        high = -((au_min - si) // q)
        lo.append(low)
        widths.append(high - low + 1)
    dense = _kernels.signature_counts(ring.A, s, q, lo, widths, threads=threads, backend=backend)
    sig_counts = {}
    for key in np.flatnonzero(dense):
        k = int(key)
        digits = []
        for w in reversed(widths):
            digits.append(k % w)
            k //= w
        sig = tuple(int(dg + l) for dg, l in zip(reversed(digits), lo))
        sig_counts[sig] = int(dense[key])
    counts: dict[ConicClass, int] = {}
    for sig, c in sig_counts.items():
        cls_ = classify(ring, sig)
        counts[cls_] = counts.get(cls_, 0) + c
    mv = MultiplicityVector(e, q, s, dict(sorted(counts.items())), dict(sorted(sig_counts.items())))
    if mv.total != n:
        raise InvariantViolation(f"summand count {mv.total} differs from rank q^d = {n}")
    return mv


def frequencies(mv: MultiplicityVector, d: int) -> dict[ConicClass, Fraction]:
    n = mv.q ** d
    return {c: Fraction(k, n) for c, k in mv.counts.items()}


@dataclass(frozen=True)
class FSignatureResult:
    exact_limit: Fraction
    sequence: tuple[tuple[int, Fraction], ...]


def f_signature(ring: ToricRing, e_max: int, **kw) -> FSignatureResult:
    free = free_class(ring)
    limit = limit_multiplicities(ring).get(free, Fraction(0))
    seq = []
    for e in range(1, e_max + 1):
        mv = frobenius_decompose(ring, None, e, **kw)
        seq.append((e, Fraction(mv.counts.get(free, 0), mv.q ** ring.d)))
    return FSignatureResult(limit, tuple(seq))


@dataclass(frozen=True)
class DualFSignatureBound:
    """Certified lower bound for the dual F-signature of the canonical module.

    Projecting ``F^e_*(omega)`` onto its summands isomorphic to ``omega``
    gives a surjection onto ``omega^count_e``, so ``count_e <= b_e`` and the
    limit frequency of the canonical class bounds ``s(omega)`` from below.
    It is never claimed to equal ``s(omega)``.
    """

    certified_lb: Fraction
    sequence: tuple[tuple[int, Fraction], ...]
    canonical: ConicClass


def dual_f_signature_lower_bound(ring: ToricRing, e_max: int, **kw) -> DualFSignatureBound:
    K = canonical_class(ring)
    omega = (1,) * ring.f
    seq = []
    for e in range(1, e_max + 1):
        mv = frobenius_decompose(ring, omega, e, **kw)
        seq.append((e, Fraction(mv.counts.get(K, 0), mv.q ** ring.d)))
    lb = limit_multiplicities(ring, omega).get(K, Fraction(0))
    return DualFSignatureBound(lb, tuple(seq), K)


# ---------------------------------------------------------------------------
# Quotient lengths  l(M_s / (theta) M_s)
# ---------------------------------------------------------------------------


def _undominated(pieces):
    """Drop pieces contained in another piece (same facets, looser bounds)."""
    dicts = [dict(p) for p in pieces]

    def contains(big, small):  # region(small) is a subset of region(big)
        return all(i in small and small[i] <= b for i, b in big.items())

    keep = []
    for k, pc in enumerate(dicts):
        if any(j != k and contains(other, pc) and (other != pc or j < k) for j, other in enumerate(dicts)):
            continue
        keep.append(tuple(sorted(pc.items())))
    return keep


def quotient_box(ring: ToricRing, s: Sequence[int], shifts: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    """Integer bounding box of ``{m : A m >= s, A m >= T_j fails for all j}``.

    ``shifts`` are the lower bounds ``T_j``. The set is a union over one
    violated facet per ``j``; each piece is bounded with exact LPs. Any
    unbounded piece means the quotient has infinite length.
    """
    f, d = ring.f, ring.d
    base_G = [[-a for a in row] for row in ring.facets]
    base_h = [-x for x in s]
    pieces = set()
    for choice in itertools.product(range(f), repeat=len(shifts)):
        bound: dict[int, int] = {}
        for j, i in enumerate(choice):
            b = shifts[j][i] - 1
            bound[i] = min(bound.get(i, b), b)
        pieces.add(tuple(sorted(bound.items())))
    if not shifts:
        pieces = {()}
    pieces = _undominated(pieces)
    lo = [None] * d
    hi = [None] * d
    for piece in sorted(pieces):
        G = base_G + [list(ring.facets[i]) for i, _ in piece]
        h = base_h + [b for _, b in piece]
        feasible = True
        for k in range(d):
            for sign in (1, -1):
                obj = [sign * int(j == k) for j in range(d)]
                res = maximize_free(obj, G, h)
                if res.status == INFEASIBLE:
                    feasible = False
                    break
                if res.status == UNBOUNDED:
                    raise NotPrimary("quotient is infinite: the elements do not generate a primary ideal")
                if sign == 1:
                    v = math.floor(res.value)
                    hi[k] = v if hi[k] is None else max(hi[k], v)
                else:
                    v = math.ceil(-res.value)
                    lo[k] = v if lo[k] is None else min(lo[k], v)
            if not feasible:
                break
    if any(x is None for x in lo):
        return [(0, -1)] * d
    return list(zip(lo, hi))


def count_quotient(
    ring: ToricRing,
    s: Sequence[int],
    shifts: Sequence[Sequence[int]],
    *,
    threads: int = 1,
    max_points: Optional[int] = None,
    backend: Optional[str] = None,
) -> int:
    """Number of lattice points of ``M_s`` outside every ``{A m >= T_j}``."""
    box = quotient_box(ring, s, shifts)
    limit = max_points_default() if max_points is None else max_points
    size = box_size(box)
    if size > limit:
        raise ResourceGuardExceeded(size, limit, "quotient box")
    if size == 0:
        return 0
    T = np.array(shifts, dtype=np.int64).reshape(len(shifts), ring.f)
    return _kernels.region_count(
        ring.A, s, T, [b[0] for b in box], [b[1] for b in box], threads=threads, backend=backend
    )


def _check_semigroup(ring: ToricRing, elems) -> list[tuple[int, ...]]:
    out = []
    for g in elems:
        g = tuple(int(x) for x in g)
        if len(g) != ring.d:
            raise ValidationError(f"element {list(g)} has length {len(g)}, expected {ring.d}")
        if not ring.contains(g):
            raise ValidationError(f"element {list(g)} is not in the cone")
        out.append(g)
    if not out:
        raise ValidationError("at least one element is required")
    return out


def sop_quotient_length(ring: ToricRing, c: ConicClass, theta, **kw) -> int:
    """``l(M_c / theta M_c)`` by lattice counting on the class representative.

    For a system of parameters this is the Koszul Euler characteristic of
    the maximal Cohen-Macaulay module ``M_c``.
    """
    theta = _check_semigroup(ring, theta)
    s = c.signature
    shifts = [tuple(si + ai for si, ai in zip(s, ring.pair(t))) for t in theta]
    n = count_quotient(ring, s, shifts, **kw)
    if n <= 0:
        raise InvariantViolation("quotient by a primary ideal has nonpositive length")
    return n
