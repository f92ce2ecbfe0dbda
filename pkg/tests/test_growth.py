import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pool import rand_expr
from polygrowth.errors import QuotientNotInferable
from polygrowth.expr import (
    Const,
    CoordPoly,
    Dirac,
    HalfRoot,
    InvNormPower,
    MagnitudeMaxSq,
    Product,
    Quotient,
    ScalarMul,
    Shift,
    coord,
)
from polygrowth.growth import (
    GrowthCertificate,
    LowerCertificate,
    NoFit,
    audit_lower,
    audit_upper,
    fit_certificate,
    infer_certificate,
    infer_lower,
)
from polygrowth.lattice import Window


def n1(dim=1):
    return coord(1, dim)


def test_certificate_invariants():
    with pytest.raises(ValueError):
        GrowthCertificate(0, 1)
    with pytest.raises(ValueError):
        GrowthCertificate(1, -1)
    with pytest.raises(ValueError):
        LowerCertificate(-1, 0)
    assert GrowthCertificate("3/2", 1).M == Fraction(3, 2)


def test_inferred_certificates():
    assert infer_certificate(n1()) == GrowthCertificate(1, 1)
    assert infer_certificate(CoordPoly({(2,): 1, (0,): -1}, 1)) == GrowthCertificate(2, 2)
    assert infer_certificate(Const(3, 2)) == GrowthCertificate(3, 0)
    assert infer_certificate(Const(Fraction(1, 2), 2)) == GrowthCertificate(1, 0)
    assert infer_certificate(Product(n1(), n1())) == GrowthCertificate(1, 2)
    assert infer_certificate(InvNormPower(4, 3)) == GrowthCertificate(1, 0)
    # |n - 2| <= 3 (1 + |n|)
    assert infer_certificate(Shift((2,), n1())) == GrowthCertificate(3, 1)
    assert infer_certificate(HalfRoot(Product(n1(), n1()))) == GrowthCertificate(1, 1)


def test_quotients_are_not_inferable():
    with pytest.raises(QuotientNotInferable):
        infer_certificate(Quotient(Const(1, 1), n1()))


def test_lower_bounds():
    assert infer_lower(InvNormPower(3, 2)) == LowerCertificate(1, 3)
    assert infer_lower(Const(5, 1)) == LowerCertificate(5, 0)
    assert infer_lower(Product(Const(2, 1), InvNormPower(1, 1))) == LowerCertificate(2, 1)
    assert infer_lower(n1()) is None
    assert infer_lower(Dirac((0,))) is None


def test_audit_finds_first_counterexample():
    # |n^2|^2 = 16 > 9 = (1 + 2)^2 first happens at n = -2 in canonical order
    rep = audit_upper(Product(n1(), n1()), GrowthCertificate(1, 1), Window(10, 1))
    assert rep.verdict == "falsified"
    assert rep.point == (-2,)
    assert (rep.lhs, rep.rhs, rep.power) == (16, 9, 2)
    assert rep.samples == 21


def test_audit_validates_true_bounds():
    rep = audit_upper(CoordPoly({(1, 0): 1, (0, 1): 1}, 2), GrowthCertificate(1, 1), Window(10, 2))
    assert rep.validated and rep.samples == 221 and rep.point is None


def test_audit_lower():
    w = Window(20, 2)
    assert audit_lower(InvNormPower(3, 2), LowerCertificate(1, 3), w).validated
    rep = audit_lower(Dirac((0, 0)), LowerCertificate(1, 0), w)
    assert rep.verdict == "falsified" and rep.point == (-1, 0)
    assert (rep.lhs, rep.rhs) == (0, 1)


def test_audit_uses_power_form_for_half_roots():
    f = HalfRoot(Product(n1(), n1()))  # |f| = |n|
    rep = audit_upper(f, GrowthCertificate(1, 1), Window(30, 1))
    assert rep.validated and rep.power == 4
    # at n = -1 the bound 1/2 * 2 is tight; n = -2 gives 2 > 3/2
    bad = audit_upper(f, GrowthCertificate(Fraction(1, 2), 1), Window(30, 1))
    assert bad.point == (-2,)
    assert (bad.lhs, bad.rhs) == (16, Fraction(81, 16))


@pytest.mark.parametrize("R", [10, 50, 100])
def test_fit_linear(R):
    # max |n| / (1 + |n|) over the window is R / (R + 1)
    fit = fit_certificate(n1(), Window(R, 1))
    assert fit == GrowthCertificate(Fraction(R, R + 1), 1, "window", R)


def test_fit_quadratic_in_two_dims():
    R = 40
    fit = fit_certificate(Product(n1(2), n1(2)), Window(R, 2))
    assert fit == GrowthCertificate(Fraction(R * R, (R + 1) ** 2), 2, "window", R)


def test_fit_of_bounded_and_zero():
    assert fit_certificate(Dirac((0,)), Window(5, 1)) == GrowthCertificate(1, 0, "window", 5)
    assert fit_certificate(Const(0, 2), Window(5, 2)) == GrowthCertificate(1, 0, "window", 5)
    assert fit_certificate(ScalarMul(3, InvNormPower(1, 1)), Window(5, 1)).m == 0


def test_fit_gives_up_past_the_cap():
    f = CoordPoly({(5,): 1}, 1)
    res = fit_certificate(f, Window(50, 1), m_cap=2)
    assert isinstance(res, NoFit)
    assert res.to_json()["scope"] == "window"
    assert len(res.evidence) >= 2
    assert fit_certificate(f, Window(50, 1), m_cap=8).m == 5


def test_fit_inverse_of_unit():
    f = Quotient(Const(1, 1), InvNormPower(2, 1))
    fit = fit_certificate(f, Window(60, 1))
    assert fit.m == 2 and fit.M == 1


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_inferred_certificate_survives_audit(seed, dim):
    f = rand_expr(random.Random(seed), dim, depth=3)
    cert = infer_certificate(f)
    assert audit_upper(f, cert, Window(8, dim)).validated


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_inferred_lower_bound_survives_audit(seed, dim):
    rng = random.Random(seed)
    f = Product(ScalarMul(Fraction(rng.randint(1, 9), rng.randint(1, 9)), InvNormPower(rng.randint(0, 4), dim)), Const(rng.randint(1, 5), dim))
    if rng.random() < 0.5:
        f = MagnitudeMaxSq((f, rand_expr(rng, dim)))
    low = infer_lower(f)
    assert low is not None
    assert audit_lower(f, low, Window(8, dim)).validated


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_fit_bounds_its_own_window(seed):
    f = rand_expr(random.Random(seed), 2, depth=3)
    fit = fit_certificate(f, Window(12, 2))
    if isinstance(fit, GrowthCertificate):
        assert audit_upper(f, fit, Window(12, 2)).validated
