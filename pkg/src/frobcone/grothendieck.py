"""Class vectors over conic classes and the cone they generate.

Conic classes are used as independent coordinates, a concrete stand-in
for the numerical Grothendieck group: no numerical relations between
distinct classes are imposed. Every conic module has rank one, so the
formal rank of a class vector is the sum of its coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from .errors import InvariantViolation, SupportError, ValidationError
from .exact import TruncSeries, lcm_denominators, todd_series
from .polyhedral import MembershipCertificate, RationalCone, member_interior
from .toric import (
    ConicClass,
    ToricRing,
    canonical_class,
    class_from_element,
    class_group,
    frobenius_decompose,
    limit_multiplicities,
)


@dataclass(frozen=True)
class ClassVector:
    support: Mapping[ConicClass, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "support", dict(sorted((c, Fraction(v)) for c, v in self.support.items())))

    @property
    def formal_rank(self) -> Fraction:
        return sum(self.support.values(), Fraction(0))

    def coordinates(self, order) -> tuple[Fraction, ...]:
        return tuple(self.support.get(c, Fraction(0)) for c in order)

    def scaled(self, k) -> "ClassVector":
        return ClassVector({c: k * v for c, v in self.support.items()})


def mu_class(ring: ToricRing) -> ClassVector:
    """The fundamental class as the limit of ``[F^e_* R] / q^d``."""
    mu = ClassVector(limit_multiplicities(ring, (0,) * ring.f))
    if mu.formal_rank != 1:
        raise InvariantViolation(f"fundamental class has rank {mu.formal_rank}")
    return mu


@dataclass(frozen=True)
class CMConeModel:
    class_order: tuple[ConicClass, ...]
    cone: RationalCone
    added_by_xi: tuple[ConicClass, ...] = ()

    @classmethod
    def orthant_over(cls, classes, added=()) -> "CMConeModel":
        order = tuple(sorted(set(classes)))
        return cls(order, RationalCone.orthant(len(order)), tuple(sorted(added)))


def observed_classes(ring: ToricRing, e_max: int, **kw) -> list[ConicClass]:
    seen = set()
    for e in range(1, e_max + 1):
        seen.update(frobenius_decompose(ring, None, e, **kw).counts)
    return sorted(seen)


def build_cm_cone(ring: ToricRing, e_max: int, **kw) -> CMConeModel:
    """Cone spanned by the conic classes seen in ``F^e_* R`` for ``e <= e_max``.

    All of them are maximal Cohen-Macaulay, so in class coordinates the
    cone is the nonnegative orthant.
    """
    return CMConeModel.orthant_over(observed_classes(ring, e_max, **kw))


def check_mu_membership(model: CMConeModel, mu: ClassVector) -> MembershipCertificate:
    outside = [c.label for c in mu.support if c not in model.class_order]
    if outside:
        raise SupportError(f"class vector has support outside the model: {outside}")
    return member_interior(model.cone, mu.coordinates(model.class_order))


@dataclass(frozen=True)
class Realization:
    n: int
    module_spec: Mapping[ConicClass, int]


def integral_realization(mu: ClassVector) -> Realization:
    """Smallest ``n`` with ``n * mu`` integral, and the module
    ``N = (+)_c M_c^{n mu_c}`` realising ``[N] = n * mu``."""
    for c, v in mu.support.items():
        if v < 0:
            raise ValidationError(f"negative coefficient {v} at class {c.label}")
    n = lcm_denominators(mu.support.values())
    spec = {c: int(v * n) for c, v in mu.support.items() if v != 0}
    return Realization(n, spec)


@dataclass(frozen=True)
class XiMap:
    """``cl -> K - cl`` on conic classes (``K`` the canonical class)."""

    mapping: Mapping[ConicClass, ConicClass]
    canonical: ConicClass
    domain: tuple[ConicClass, ...]
    missing: tuple[ConicClass, ...] = ()

    def __call__(self, c: ConicClass) -> ConicClass:
        return self.mapping[c]

    @property
    def closed(self) -> bool:
        return not self.missing

    def is_involution(self) -> bool:
        return all(self.mapping[self.mapping[c]] == c for c in self.mapping)

    def is_identity(self) -> bool:
        return all(k == v for k, v in self.mapping.items())


def xi(ring: ToricRing, classes=None) -> XiMap:
    """The involution induced by dualising into the canonical module.

    ``classes`` defaults to the support of the fundamental class. Images
    falling outside it are listed in ``missing`` and added to the mapping.
    """
    grp = class_group(ring)
    K = canonical_class(ring)
    domain = tuple(sorted(classes if classes is not None else limit_multiplicities(ring)))
    mapping = {}
    missing = []
    pending = list(domain)
    while pending:
        c = pending.pop(0)
        if c in mapping:
            continue
        img = class_from_element(ring, grp.sub(K.element, c.element))
        mapping[c] = img
        if img not in domain and img not in missing:
            missing.append(img)
            pending.append(img)
    result = XiMap(dict(sorted(mapping.items())), K, domain, tuple(sorted(missing)))
    if not result.is_involution():
        raise InvariantViolation("xi is not an involution")
    return result


def close_under_xi(model: CMConeModel, ximap: XiMap) -> CMConeModel:
    """Enlarge the cone by the xi-images of its generators."""
    extra = [ximap(c) for c in model.class_order if ximap(c) not in model.class_order]
    if not extra:
        return model
    return CMConeModel.orthant_over(list(model.class_order) + extra, tuple(model.added_by_xi) + tuple(extra))


def xi_lambda_comparison(ring: ToricRing) -> list[tuple[ConicClass, ConicClass, Fraction, Fraction]]:
    """``(c, xi(c), lambda_c, lambda_xi(c))`` rows; reported, never asserted."""
    lam = limit_multiplicities(ring)
    xm = xi(ring)
    return [(c, xm(c), lam.get(c, Fraction(0)), lam.get(xm(c), Fraction(0))) for c in xm.mapping]


# ---------------------------------------------------------------------------
# Determinantal rings k[x_ij]/I_2 of a generic (m+1) x (n+1) matrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DetMatReport:
    m: int
    n: int
    tauR: TruncSeries
    tauOmega: TruncSeries
    mu: TruncSeries
    kClass: TruncSeries


def chow_determinantal(m: int, n: int) -> DetMatReport:
    """Riemann-Roch images in ``Q[a]/(a^{m+1})`` for the determinantal ring.

    ``[R] -> toddPlus^m * toddMinus^n`` and ``[omega] -> toddMinus^m * toddPlus^n``.
    The fundamental class is the top-dimensional (constant) part of the
    image of ``[R]``; the canonical divisor is read off as the degree-one
    part of ``tau(omega) - tau(R)``.
    """
    if not (isinstance(m, int) and isinstance(n, int)) or not 0 < m <= n:
        raise ValidationError(f"need 0 < m <= n, got m={m}, n={n}")
    t = m + 1
    plus, minus = todd_series("plus", t), todd_series("minus", t)
    tau_r = plus ** m * minus ** n
    tau_w = minus ** m * plus ** n
    mu = TruncSeries.of([tau_r[0]], t)
    diff = tau_w - tau_r
    k_class = TruncSeries.of([0, diff[1]], t)
    if tau_r[1] != Fraction(m - n, 2):
        raise InvariantViolation("linear coefficient of tau(R) is not (m-n)/2")
    if tau_w != tau_r.negate_variable():
        raise InvariantViolation("tau(omega) is not tau(R) with a -> -a")
    if mu != TruncSeries.one(t):
        raise InvariantViolation("fundamental class does not map to 1")
    return DetMatReport(m, n, tau_r, tau_w, mu, k_class)
