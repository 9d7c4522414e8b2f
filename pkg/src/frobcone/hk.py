"""Hilbert-Kunz sampling for monomial ideals and signed-power fitting."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .errors import InvariantViolation, ValidationError
from .exact import solve_exact
from .toric import (
    ToricRing,
    _check_semigroup,
    count_quotient,
    frobenius_decompose,
    sop_quotient_length,
)


@dataclass(frozen=True)
class MonomialIdeal:
    generators: tuple[tuple[int, ...], ...]

    @classmethod
    def from_spec(cls, spec: Mapping) -> "MonomialIdeal":
        if "generators" not in spec:
            raise ValidationError("missing field 'generators'", field="generators")
        try:
            gens = tuple(tuple(int(x) for x in g) for g in spec["generators"])
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"malformed ideal: {exc}", field="generators") from exc
        if not gens:
            raise ValidationError("ideal needs at least one generator", field="generators")
        return cls(gens)

    def to_spec(self) -> dict:
        return {"generators": [list(g) for g in self.generators]}


@dataclass(frozen=True)
class HKSample:
    e: int
    q: int
    length: int


def frobenius_power_length(ring: ToricRing, ideal: MonomialIdeal, e: int, **kw) -> HKSample:
    """``l(R / I^[q])``: lattice points of ``C`` outside every ``q g + C``."""
    if e < 0:
        raise ValidationError("exponent must be nonnegative", field="e")
    gens = _check_semigroup(ring, ideal.generators)
    q = ring.p ** e
    shifts = [ring.pair([q * x for x in g]) for g in gens]
    n = count_quotient(ring, (0,) * ring.f, shifts, **kw)
    return HKSample(e, q, n)


def hk_samples(ring: ToricRing, ideal: MonomialIdeal, e_values: Sequence[int], *, workers: int = 1, **kw) -> list[HKSample]:
    """Samples for several exponents, optionally computed concurrently;
    returned in increasing ``e`` regardless of completion order."""
    es = sorted(set(e_values))
    if workers <= 1:
        return [frobenius_power_length(ring, ideal, e, **kw) for e in es]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(lambda e: frobenius_power_length(ring, ideal, e, **kw), es))


@dataclass(frozen=True)
class HKFit:
    """``length(e) = sum_i c_i p^{i e}`` with ``c_i = eps_i * magnitude_i``.

    ``alpha`` is the magnitude of the top coefficient, ``beta[i]`` those of
    the lower ones.
    """

    p: int
    d: int
    coefficients: tuple[Fraction, ...]
    eps: tuple[int, ...]
    alpha: Fraction
    beta: tuple[Fraction, ...]
    residuals: Mapping[int, Fraction]
    exact_fit: bool

    def evaluate(self, e: int) -> Fraction:
        q = self.p ** e
        return sum((c * q ** i for i, c in enumerate(self.coefficients)), Fraction(0))


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def fit_signed_powers(samples: Sequence[HKSample], p: int, d: int) -> HKFit:
    """Solve for ``c_0..c_d`` on the first ``d+1`` samples (by ``e``) and
    validate on the rest. ``exact_fit`` holds iff every held-out residual is
    zero and the top coefficient is positive."""
    samples = sorted(samples, key=lambda s: s.e)
    es = [s.e for s in samples]
    if len(set(es)) != len(es):
        raise ValidationError("repeated exponent: the Vandermonde system is singular")
    if len(samples) < d + 2:
        raise ValidationError(f"need at least {d + 2} samples, got {len(samples)}")
    head, tail = samples[: d + 1], samples[d + 1:]
    rows = [[Fraction(p) ** (i * s.e) for i in range(d + 1)] for s in head]
    coeffs = solve_exact(rows, [s.length for s in head])
    if coeffs is None:
        raise ValidationError("singular system")
    coeffs = tuple(coeffs)
    eps = tuple(_sign(c) for c in coeffs)
    residuals = {}
    for s in tail:
        pred = sum((c * Fraction(p) ** (i * s.e) for i, c in enumerate(coeffs)), Fraction(0))
        residuals[s.e] = s.length - pred
    exact = all(r == 0 for r in residuals.values()) and coeffs[d] > 0
    return HKFit(
        p, d, coeffs, eps, abs(coeffs[d]), tuple(abs(c) for c in coeffs[:d]), residuals, exact
    )


@dataclass(frozen=True)
class CrossCheck:
    lhs: int
    rhs: int
    terms: tuple  # (ConicClass, count, quotient length)

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def hk_cross_check(ring: ToricRing, theta, e: int, **kw) -> CrossCheck:
    """Two independent counts of ``l(R / (theta)^[q])``.

    ``lhs`` sums multiplicities of the Frobenius decomposition weighted by
    ``l(M_c / theta M_c)``; ``rhs`` counts the quotient of ``R`` directly.
    """
    ideal = MonomialIdeal(tuple(tuple(int(x) for x in g) for g in theta))
    mv = frobenius_decompose(ring, None, e, **kw)
    terms = []
    lhs = 0
    for c, count in mv.counts.items():
        ell = sop_quotient_length(ring, c, ideal.generators)
        terms.append((c, count, ell))
        lhs += count * ell
    rhs = frobenius_power_length(ring, ideal, e, **kw).length
    return CrossCheck(lhs, rhs, tuple(terms))
