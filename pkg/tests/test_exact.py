from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frobcone.exact import (
    IntMatrix,
    TruncSeries,
    as_rat,
    det_exact,
    exp_series,
    lcm_denominators,
    nullspace,
    primitive_vector,
    rank,
    snf,
    solve_exact,
    todd_series,
    ts_inv,
    ts_mul,
)

F = Fraction


def series(*coeffs, trunc=None):
    return TruncSeries.of([F(c) for c in coeffs], trunc)


@pytest.mark.parametrize(
    "rows, diag",
    [
        ([[1, 0], [0, 1]], (1, 1)),
        ([[2, 4], [6, 8]], (2, 4)),
        ([[0, 1], [2, -1]], (1, 2)),
        ([[0, 1], [3, -1]], (1, 3)),
        ([[1, 0, 0], [0, 1, 0], [-1, 0, 1], [0, -1, 1]], (1, 1, 1)),
        ([[0, 0], [0, 0]], (0, 0)),
    ],
)
def test_snf_examples(rows, diag):
    A = IntMatrix.from_rows(rows)
    res = snf(A)
    assert res.diagonal == diag
    assert (res.U @ A @ res.V).to_rows() == res.S.to_rows()
    assert abs(res.U.det()) == 1 and abs(res.V.det()) == 1


small = st.integers(min_value=-9, max_value=9)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_snf_properties(r, c, data):
    rows = [[data.draw(small) for _ in range(c)] for _ in range(r)]
    A = IntMatrix.from_rows(rows)
    res = snf(A)
    S = res.S.to_rows()
    assert (res.U @ A @ res.V).to_rows() == S
    assert abs(res.U.det()) == 1 and abs(res.V.det()) == 1
    for i in range(r):
        for j in range(c):
            if i != j:
                assert S[i][j] == 0
    diag = res.diagonal
    assert all(x >= 0 for x in diag)
    for a, b in zip(diag, diag[1:]):
        if a == 0:
            assert b == 0
        else:
            assert b % a == 0
    assert snf(A) == res  # deterministic
    # rank and |det| are SNF invariants
    assert sum(1 for x in diag if x) == rank(rows)
    if r == c:
        prod = 1
        for x in diag:
            prod *= x
        assert prod == abs(det_exact(rows))


def test_ts_mul_examples():
    assert ts_mul(series(1, 1, 0), series(1, -1, 0)) == series(1, 0, -1)
    assert ts_mul(series(1, F(1, 2)), series(1, F(1, 2))) == series(1, 1)
    m = ts_mul(todd_series("plus", 2), todd_series("minus", 2))
    assert m == series(1, 0)
    with pytest.raises(ValueError):
        ts_mul(series(1, 1), series(1, 1, 1))


def test_ts_inv_examples():
    assert ts_inv(series(1, -1, 0, 0)) == series(1, 1, 1, 1)
    assert ts_inv(series(1, 1, 0)) == series(1, -1, 1)
    with pytest.raises(ZeroDivisionError):
        ts_inv(series(0, 1))


def test_todd_unit_part():
    # (1 - e^{-a})/a = 1 - a/2 + a^2/6 - a^3/24 + a^4/120, inverted by hand
    unit = series(1, F(-1, 2), F(1, 6), F(-1, 24), F(1, 120))
    assert ts_inv(unit) == series(1, F(1, 2), F(1, 12), 0, F(-1, 720))
    assert todd_series("plus", 5) == series(1, F(1, 2), F(1, 12), 0, F(-1, 720))
    assert todd_series("plus", 2) == series(1, F(1, 2))
    assert todd_series("minus", 2) == series(1, F(-1, 2))


def _bernoulli(n):
    # independent oracle: B_n via the Akiyama-Tanigawa algorithm (B_1 = +1/2)
    a = [F(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = F(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


@pytest.mark.parametrize("trunc", range(1, 11))
def test_todd_matches_bernoulli(trunc):
    plus = todd_series("plus", trunc)
    minus = todd_series("minus", trunc)
    fact = 1
    for k in range(trunc):
        fact = fact * k if k else 1
        assert plus[k] == _bernoulli(k) / fact
    assert minus == plus.negate_variable()
    assert ts_mul(plus, ts_inv(plus)) == TruncSeries.one(trunc)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 7), st.data())
def test_series_ring_laws(trunc, data):
    q = st.fractions(min_value=-5, max_value=5, max_denominator=7)
    f = TruncSeries.of([data.draw(q) for _ in range(trunc)], trunc)
    g = TruncSeries.of([data.draw(q) for _ in range(trunc)], trunc)
    h = TruncSeries.of([data.draw(q) for _ in range(trunc)], trunc)
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    if f[0] != 0:
        assert f * ts_inv(f) == TruncSeries.one(trunc)
    assert (f * g).negate_variable() == f.negate_variable() * g.negate_variable()


def test_exp_series():
    assert exp_series(4) == series(1, 1, F(1, 2), F(1, 6))
    assert exp_series(4, -1) == series(1, -1, F(1, 2), F(-1, 6))
    assert ts_mul(exp_series(6), exp_series(6, -1)) == TruncSeries.one(6)


def test_rational_helpers():
    assert as_rat(3) == 3 and as_rat("2/6") == F(1, 3)
    with pytest.raises(TypeError):
        as_rat(0.5)
    assert lcm_denominators([F(1, 2), F(1, 3), 1]) == 6
    assert primitive_vector([F(2, 3), F(4, 3)]) == (1, 2)
    assert primitive_vector([0, -6, 9]) == (0, -2, 3)


def test_linear_algebra():
    assert nullspace([[1, 1, 0], [0, 1, 1]], 3) in ([(1, -1, 1)], [(-1, 1, -1)])
    assert solve_exact([[2, 1], [1, 3]], [3, 5]) == [F(4, 5), F(7, 5)]
    assert solve_exact([[1, 2], [2, 4]], [1, 2]) is None
    assert det_exact([[1, 2], [3, 4]]) == -2
