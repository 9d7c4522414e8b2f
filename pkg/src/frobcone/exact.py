"""Exact arithmetic: rationals, integer matrices, Smith normal form and
truncated power series over Q.

Rationals are :class:`fractions.Fraction`, which is already canonical
(lowest terms, positive denominator), so equality is structural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rat = Fraction


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact computations")
    return Fraction(x)


def parse_rat(text: str) -> Fraction:
    """Parse ``"p/q"`` or an integer string."""
    return Fraction(text)


def lcm_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, as_rat(v).denominator)
    return out


def primitive_vector(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    vals = [as_rat(x) for x in v]
    den = lcm_denominators(vals)
    ints = [int(x * den) for x in vals]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


# ---------------------------------------------------------------------------
# Integer matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows * self.cols != len(self.entries):
            raise ValueError("rows*cols does not match number of entries")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), ncols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        a, b = self.to_rows(), other.to_rows()
        return IntMatrix.from_rows(
            [[sum(a[i][k] * b[k][j] for k in range(self.cols)) for j in range(other.cols)]
             for i in range(self.rows)]
        )

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        rows = self.to_rows()
        return tuple(sum(r[k] * v[k] for k in range(self.cols)) for r in rows)

    def det(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return int(det_exact(self.to_rows()))


def det_exact(rows: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    m = [[as_rat(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] * inv
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (matrix, pivot columns)."""
    m = [[as_rat(x) for x in r] for r in rows]
    if not m:
        return m, []
    nrows, ncols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1]) if rows else 0


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[int, ...]]:
    """Basis of the rational kernel, each vector made primitive integral."""
    if not rows:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    m, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(primitive_vector(v))
    return basis


def solve_exact(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """Unique solution of a square system, or None if singular."""
    n = len(rows)
    aug = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    m, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [m[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SNFResult:
    U: IntMatrix
    V: IntMatrix
    S: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.rows, self.S.cols)))


def snf(A: IntMatrix) -> SNFResult:
    """Smith normal form ``U @ A @ V == S``.

    Pivot rule: smallest nonzero absolute value in the active submatrix,
    ties broken by (row, col) order. Output is deterministic.
    """
    m, n = A.rows, A.cols
    if m == 0 or n == 0:
        raise ValueError("snf of an empty matrix")
    S = A.to_rows()
    U = IntMatrix.identity(m).to_rows()
    V = IntMatrix.identity(n).to_rows()

    def row_add(dst, src, k):  # row_dst += k * row_src
        S[dst] = [a + k * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def col_add(dst, src, k):
        for r in S:
            r[dst] += k * r[src]
        for r in V:
            r[dst] += k * r[src]

    def row_swap(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for r in S:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = S[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, i, j = best
            if i != t:
                row_swap(i, t)
            if j != t:
                col_swap(j, t)
            piv = S[t][t]
            clean = True
            for i in range(t + 1, m):
                if S[i][t]:
                    row_add(i, t, -(S[i][t] // piv))
                    clean = clean and S[i][t] == 0
            for j in range(t + 1, n):
                if S[t][j]:
                    col_add(j, t, -(S[t][j] // piv))
                    clean = clean and S[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % piv), None)
            if bad is not None:
                row_add(t, bad, 1)
                continue
            break
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
    return SNFResult(IntMatrix.from_rows(U), IntMatrix.from_rows(V), IntMatrix.from_rows(S))


# ---------------------------------------------------------------------------
# Truncated power series in one variable a, modulo a**trunc
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TruncSeries:
    trunc: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.trunc < 1:
            raise ValueError("trunc must be at least 1")
        if len(self.coeffs) != self.trunc:
            raise ValueError("coefficient count must equal trunc")

    @classmethod
    def of(cls, coeffs: Sequence, trunc: int | None = None) -> "TruncSeries":
        cs = [as_rat(c) for c in coeffs]
        trunc = len(cs) if trunc is None else trunc
        cs = (cs + [Fraction(0)] * trunc)[:trunc]
        return cls(trunc, tuple(cs))

    @classmethod
    def one(cls, trunc: int) -> "TruncSeries":
        return cls.of([1], trunc)

    def _check(self, other):
        if self.trunc != other.trunc:
            raise ValueError(f"trunc mismatch: {self.trunc} vs {other.trunc}")

    def __add__(self, other):
        self._check(other)
        return TruncSeries(self.trunc, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return TruncSeries(self.trunc, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return TruncSeries(self.trunc, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            return ts_mul(self, other)
        k = as_rat(other)
        return TruncSeries(self.trunc, tuple(k * a for a in self.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = TruncSeries.one(self.trunc)
        for _ in range(k):
            out = ts_mul(out, self)
        return out

    def negate_variable(self) -> "TruncSeries":
        """Substitute a -> -a."""
        return TruncSeries(self.trunc, tuple(c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)))

    def __getitem__(self, k):
        return self.coeffs[k]


def ts_mul(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    f._check(g)
    n = f.trunc
    out = [Fraction(0)] * n
    for i, a in enumerate(f.coeffs):
        if a:
            for j in range(n - i):
                out[i + j] += a * g.coeffs[j]
    return TruncSeries(n, tuple(out))


def ts_inv(f: TruncSeries) -> TruncSeries:
    """Multiplicative inverse modulo a**trunc; requires a unit constant term."""
    c0 = f.coeffs[0]
    if c0 == 0:
        raise ZeroDivisionError("series with zero constant term is not a unit")
    n = f.trunc
    inv = [Fraction(0)] * n
    inv[0] = 1 / c0
    for k in range(1, n):
        acc = sum(f.coeffs[j] * inv[k - j] for j in range(1, k + 1))
        inv[k] = -acc / c0
    return TruncSeries(n, tuple(inv))


def exp_series(trunc: int, sign: int = 1) -> TruncSeries:
    """exp(sign * a) with exact factorials."""
    return TruncSeries.of([Fraction(sign ** k, math.factorial(k)) for k in range(trunc)], trunc)


def todd_series(sign: str, trunc: int) -> TruncSeries:
    """``a/(1-exp(-a))`` for ``"plus"`` and ``-a/(1-exp(a))`` for ``"minus"``.

    Built as the inverse of the unit part of ``(1-exp(-a))/a`` (resp.
    ``(exp(a)-1)/a``), which only needs one extra exponential term.
    """
    if trunc < 1:
        raise ValueError("trunc must be at least 1")
    if sign not in ("plus", "minus"):
        raise ValueError(f"sign must be 'plus' or 'minus', not {sign!r}")
    s = -1 if sign == "plus" else 1
    e = exp_series(trunc + 1, s)
    # (1 - e^{-a})/a  or  (e^{a} - 1)/a : drop the constant and shift down
    unit = TruncSeries.of([s * c for c in e.coeffs[1:]], trunc)
    return ts_inv(unit)
