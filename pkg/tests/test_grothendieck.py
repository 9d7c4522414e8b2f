from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frobcone import corpus
from frobcone.errors import SupportError, ValidationError
from frobcone.exact import todd_series
from frobcone.grothendieck import (
    ClassVector,
    CMConeModel,
    build_cm_cone,
    check_mu_membership,
    chow_determinantal,
    close_under_xi,
    integral_realization,
    mu_class,
    xi,
    xi_lambda_comparison,
)
from frobcone.toric import canonical_class, free_class

F = Fraction


def labels(mapping):
    return {c.label: v for c, v in mapping.items()}


def test_mu_examples(rings):
    assert labels(mu_class(rings["orthant2"]).support) == {"free": 1}
    assert labels(mu_class(rings["veronese2"]).support) == {"free": F(1, 2), "c": F(1, 2)}
    assert labels(mu_class(rings["veronese3"]).support) == {"free": F(1, 3), "c": F(1, 3), "c^2": F(1, 3)}


@pytest.mark.parametrize("name", corpus.RINGS)
def test_mu_is_a_probability_vector(rings, name):
    mu = mu_class(rings[name])
    assert mu.formal_rank == 1
    assert all(0 <= v <= 1 for v in mu.support.values())


@pytest.mark.parametrize("name, n", [("orthant2", 1), ("veronese2", 2), ("veronese3", 3), ("conifold", 3)])
def test_cm_cone_generators(rings, name, n):
    assert len(build_cm_cone(rings[name], 2).class_order) == n


@pytest.mark.parametrize("name", corpus.RINGS)
def test_mu_membership_certificates(rings, name):
    ring = rings[name]
    model = build_cm_cone(ring, 2)
    mu = mu_class(ring)
    cert = check_mu_membership(model, mu)
    assert cert.verdict == "interior" and cert.verify()
    assert cert.coefficients == mu.coordinates(model.class_order)


def test_membership_outside_and_support_error(rings):
    ring = rings["veronese2"]
    model = build_cm_cone(ring, 2)
    neg = ClassVector({free_class(ring): -1})
    cert = check_mu_membership(model, neg)
    assert cert.verdict == "outside" and cert.verify()
    v3 = rings["veronese3"]
    small = CMConeModel.orthant_over([free_class(v3)])
    with pytest.raises(SupportError):
        check_mu_membership(small, mu_class(v3))


def test_realization_examples(rings):
    r = integral_realization(mu_class(rings["orthant2"]))
    assert r.n == 1 and labels(r.module_spec) == {"free": 1}
    r = integral_realization(mu_class(rings["veronese2"]))
    assert r.n == 2 and labels(r.module_spec) == {"free": 1, "c": 1}
    r = integral_realization(mu_class(rings["veronese3"]))
    assert r.n == 3 and labels(r.module_spec) == {"free": 1, "c": 1, "c^2": 1}
    r = integral_realization(mu_class(rings["conifold"]))
    assert r.n == 6 and labels(r.module_spec) == {"free": 4, "c": 1, "c^-1": 1}
    with pytest.raises(ValidationError):
        integral_realization(ClassVector({free_class(rings["orthant2"]): -1}))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(corpus.RINGS), st.integers(1, 12))
def test_realization_scales(name, k):
    mu = mu_class(corpus.load_ring(name))
    base = integral_realization(mu)
    big = integral_realization(mu.scaled(k))
    assert {c: F(v, big.n) for c, v in big.module_spec.items()} == {
        c: F(v * k, base.n) for c, v in base.module_spec.items()
    }
    for c, v in big.module_spec.items():
        assert F(v, big.n) == k * mu.support[c]


@pytest.mark.parametrize("name", corpus.RINGS)
def test_realization_reproduces_n_mu(rings, name):
    mu = mu_class(rings[name])
    r = integral_realization(mu)
    assert {c: F(v) for c, v in r.module_spec.items()} == {c: r.n * v for c, v in mu.support.items() if v}


def test_xi_examples(rings):
    x2 = xi(rings["veronese2"])
    assert x2.is_identity()
    x3 = xi(rings["veronese3"])
    m = {a.label: b.label for a, b in x3.mapping.items()}
    assert m == {"free": "c", "c": "free", "c^2": "c^2"}


@pytest.mark.parametrize("name", corpus.RINGS)
def test_xi_properties(rings, name):
    ring = rings[name]
    model = build_cm_cone(ring, 2)
    xm = xi(ring, model.class_order)
    assert xm.is_involution()
    assert xm(free_class(ring)) == canonical_class(ring)
    closed = close_under_xi(model, xm)
    gens = set(closed.class_order)
    xm2 = xi(ring, closed.class_order)
    assert {xm2(c) for c in gens} == gens
    for c, d, a, b in xi_lambda_comparison(ring):
        assert xm(c) == d and a >= 0 and b >= 0


def test_close_under_xi_adds_missing(rings):
    ring = rings["veronese3"]
    # a model that only knows the free class must gain the canonical class
    model = CMConeModel.orthant_over([free_class(ring)])
    xm = xi(ring, model.class_order)
    assert not xm.closed
    closed = close_under_xi(model, xm)
    assert [c.label for c in closed.added_by_xi] == ["c"]


@pytest.mark.parametrize("m, n", [(1, 1), (1, 2), (2, 2), (2, 3)])
def test_detmat_golden(m, n):
    rep = chow_determinantal(m, n)
    assert rep.tauR[0] == 1 and rep.tauR[1] == F(m - n, 2)
    assert rep.mu.coeffs == (F(1),) + (F(0),) * m
    assert rep.kClass[1] == n - m and all(rep.kClass[k] == 0 for k in range(rep.kClass.trunc) if k != 1)
    assert rep.tauOmega == rep.tauR.negate_variable()


def test_detmat_examples():
    rep = chow_determinantal(1, 2)
    assert rep.tauR.coeffs == (F(1), F(-1, 2))
    assert rep.kClass.coeffs == (F(0), F(1))
    rep = chow_determinantal(2, 2)
    assert rep.tauR[1] == 0 and all(x == 0 for x in rep.kClass.coeffs)
    # c_2 for m = n = 2: (toddPlus * toddMinus)^2 gives 2 * (1/12 + 1/12 - 1/4) = -1/6
    assert rep.tauR[2] == F(-1, 6)


@pytest.mark.parametrize("m", range(1, 7))
def test_detmat_properties(m):
    for n in range(m, 7):
        rep = chow_determinantal(m, n)
        assert rep.tauR[1] == F(m - n, 2)
        assert rep.tauOmega == rep.tauR.negate_variable()
        assert rep.mu[0] == 1


@pytest.mark.parametrize("m, n", [(0, 1), (2, 1), (-1, 3)])
def test_detmat_rejects(m, n):
    with pytest.raises(ValidationError):
        chow_determinantal(m, n)
