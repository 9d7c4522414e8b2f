"""Exact rational linear programming.

Two-phase tableau simplex over :class:`~fractions.Fraction` with Bland's
rule, so it cannot cycle and every run is replayable. Besides the primal
solution it exposes the dual vector (for optimal problems) and a Farkas
certificate (for infeasible ones); membership certificates are read off
those.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: list[Fraction] | None = None
    value: Fraction | None = None
    dual: list[Fraction] | None = None
    # y with y @ A <= 0 and y @ b > 0 (original row signs); only when infeasible
    farkas: list[Fraction] | None = None
    pivots: int = 0
    notes: list[str] = field(default_factory=list)


class _Tableau:
    """Rows ``[coeffs | rhs]`` with an explicit basis list."""

    def __init__(self, rows, basis):
        self.rows = rows
        self.basis = basis
        self.pivots = 0

    def pivot(self, r, c):
        row = self.rows[r]
        inv = 1 / row[c]
        row = [x * inv for x in row]
        self.rows[r] = row
        for i, other in enumerate(self.rows):
            if i != r:
                f = other[c]
                if f:
                    self.rows[i] = [a - f * b for a, b in zip(other, row)]
        self.basis[r] = c
        self.pivots += 1

    def reduced_costs(self, cost, ncols):
        # r_j = c_j - c_B B^{-1} A_j, with B^{-1} A already in the rows
        red = list(cost[:ncols])
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.rows[i]
                for j in range(ncols):
                    if row[j]:
                        red[j] -= cb * row[j]
        return red

    def run(self, cost, allowed):
        """Minimise ``cost @ x``; returns False when unbounded."""
        ncols = len(cost)
        while True:
            red = self.reduced_costs(cost, ncols)
            enter = next((j for j in range(ncols) if allowed[j] and red[j] < 0), None)
            if enter is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], enter)


def solve_standard(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Minimise ``c @ x`` subject to ``A @ x == b`` and ``x >= 0``."""
    m = len(A)
    n = len(c)
    c = [Fraction(x) for x in c]
    flip = [Fraction(-1) if Fraction(b[i]) < 0 else Fraction(1) for i in range(m)]
    rows = []
    for i in range(m):
        coeffs = [flip[i] * Fraction(x) for x in A[i]]
        art = [Fraction(int(i == k)) for k in range(m)]
        rows.append(coeffs + art + [flip[i] * Fraction(b[i])])
    tab = _Tableau(rows, [n + i for i in range(m)])

    # phase 1
    cost1 = [Fraction(0)] * n + [Fraction(1)] * m
    tab.run(cost1, [True] * (n + m))
    red1 = tab.reduced_costs(cost1, n + m)
    infeas = sum(tab.rows[i][-1] for i, bv in enumerate(tab.basis) if bv >= n)
    if infeas > 0:
        # duals of phase 1 live in the artificial columns: y_k = 1 - r_{n+k}
        y = [(1 - red1[n + k]) * flip[k] for k in range(m)]
        return LPResult(INFEASIBLE, farkas=y, pivots=tab.pivots)

    # drive zero-level artificials out of the basis; drop redundant rows
    for i in range(m - 1, -1, -1):
        if tab.basis[i] >= n:
            col = next((j for j in range(n) if tab.rows[i][j] != 0), None)
            if col is not None:
                tab.pivot(i, col)

    # phase 2, artificials never re-enter
    cost2 = c + [Fraction(0)] * m
    allowed = [True] * n + [False] * m
    if not tab.run(cost2, allowed):
        return LPResult(UNBOUNDED, pivots=tab.pivots)
    x = [Fraction(0)] * n
    for i, bv in enumerate(tab.basis):
        if bv < n:
            x[bv] = tab.rows[i][-1]
    red2 = tab.reduced_costs(cost2, n + m)
    y = [-red2[n + k] * flip[k] for k in range(m)]
    value = sum(ci * xi for ci, xi in zip(c, x))
    return LPResult(OPTIMAL, x=x, value=value, dual=y, pivots=tab.pivots)


def feasible_combination(columns: Sequence[Sequence], target: Sequence) -> LPResult:
    """Find ``lam >= 0`` with ``sum lam_j * columns[j] == target``.

    On failure the Farkas vector ``y`` satisfies ``y @ col <= 0`` for every
    column and ``y @ target > 0``.
    """
    n = len(target)
    k = len(columns)
    A = [[Fraction(columns[j][i]) for j in range(k)] for i in range(n)]
    return solve_standard([0] * k, A, target)


def maximize_free(objective: Sequence, G: Sequence[Sequence], h: Sequence) -> LPResult:
    """Maximise ``objective @ x`` over ``G @ x <= h`` with free ``x``.

    Returned ``value`` is the maximum (not negated); ``x`` is a maximiser.
    """
    d = len(objective)
    rows = []
    for i, g in enumerate(G):
        slack = [Fraction(int(i == k)) for k in range(len(G))]
        rows.append([Fraction(v) for v in g] + [-Fraction(v) for v in g] + slack)
    cost = [-Fraction(v) for v in objective] + [Fraction(v) for v in objective] + [Fraction(0)] * len(G)
    res = solve_standard(cost, rows, h)
    if res.status != OPTIMAL:
        return res
    x = [res.x[i] - res.x[d + i] for i in range(d)]
    return LPResult(OPTIMAL, x=x, value=-res.value, dual=res.dual, pivots=res.pivots)
