import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pool import rand_expr, rand_nonzero_expr
from polygrowth.errors import EmptyList
from polygrowth.expr import (
    Const,
    CoordPoly,
    Dirac,
    DiracComplement,
    HalfRoot,
    InvNormPower,
    MagnitudeMaxSq,
    Product,
    ScalarMul,
    coord,
    evaluate_points,
    sum_of,
)
from polygrowth.growth import GrowthCertificate
from polygrowth.lattice import Window
from polygrowth.ring import (
    Divides,
    Inconclusive,
    Invertible,
    Member,
    NotInvertible,
    NotMember,
    RefutedAtZero,
    divides,
    gcd,
    ideal_member,
    is_invertible,
    principal_generator,
)

W20 = Window(20, 1)


def x_plus(c):
    return CoordPoly({(1,): 1, (0,): c}, 1)


def test_constant_divides_everything():
    v = divides(Const(1, 1), CoordPoly({(2,): 1, (0,): -1}, 1), W20)
    assert isinstance(v, Divides)
    assert v.cert == GrowthCertificate(2, 2)
    assert v.scope == "global" and v.audit.validated


def test_divisor_with_stray_zero_is_refuted():
    v = divides(DiracComplement((0,)), x_plus(1), W20)
    assert v == RefutedAtZero((0,))
    assert divides(coord(1, 1), x_plus(1), W20) == RefutedAtZero((0,))


def test_polynomial_factor_gets_window_certificate():
    # (n^2 - 1) / (n + 1) = n - 1, and |n - 1| <= 1 * (1 + |n|)
    v = divides(x_plus(1), CoordPoly({(2,): 1, (0,): -1}, 1), W20)
    assert isinstance(v, Divides)
    assert v.cert == GrowthCertificate(1, 1, "window", 20)
    assert v.scope == "window"


def test_product_divisor_is_certified_globally():
    g = Product(x_plus(1), InvNormPower(1, 1))
    f = ScalarMul(3, Product(Product(coord(1, 1), x_plus(1)), InvNormPower(1, 1)))
    v = divides(g, f, W20)
    assert isinstance(v, Divides) and v.scope == "global"
    assert v.cert == GrowthCertificate(3, 1)


def test_units():
    for m in range(4):
        v = is_invertible(InvNormPower(m, 2), Window(10, 2))
        assert isinstance(v, Invertible)
        assert (v.lower.delta, v.lower.m, v.scope) == (1, m, "global")
    assert is_invertible(coord(1, 1), W20) == NotInvertible((0,))
    assert is_invertible(Const(0, 2), W20) == NotInvertible((0, 0))
    assert is_invertible(Dirac((0,)), W20) == NotInvertible((-1,))
    assert is_invertible(DiracComplement((3,)), W20) == NotInvertible((3,))


def test_unit_without_structural_bound_is_window_scoped():
    f = MagnitudeMaxSq((DiracComplement((0,)), Dirac((0,))))
    v = is_invertible(f, W20)
    assert isinstance(v, Invertible) and v.scope == "window"


def test_gcd_shape():
    with pytest.raises(EmptyList):
        gcd([])
    d = gcd([coord(1, 1), Const(2, 1)])
    assert isinstance(d, MagnitudeMaxSq) and len(d.args) == 2


def test_membership_basic():
    g = x_plus(-2)
    v = ideal_member(Product(coord(1, 1), g), [g], W20)
    assert isinstance(v, Member) and v.scope == "global"
    assert ideal_member(Const(1, 1), [coord(1, 1)], W20) == NotMember((0,))


def test_membership_of_one_in_complementary_ideal():
    v = ideal_member(Const(1, 1), [DiracComplement((0,)), Dirac((0,))], W20)
    assert isinstance(v, Member)
    assert v.decided and v.scope == "window"


def test_membership_with_half_root_is_inconclusive():
    v = ideal_member(HalfRoot(Const(4, 1)), [Const(1, 1)], W20)
    assert isinstance(v, Inconclusive) and not v.decided


def test_membership_rejects_empty_list():
    with pytest.raises(EmptyList):
        ideal_member(Const(1, 1), [], W20)


def test_principal_generator_report():
    rep = principal_generator([coord(1, 1), Const(3, 1)], Window(15, 1))
    assert all(isinstance(v, Divides) for v in rep.forward)
    assert isinstance(rep.reverse, Member)
    assert rep.to_json()["scope"] in ("global", "window")


def _bezout_identity_holds(f, gens, v, w):
    pts = w.array()
    total = evaluate_points(sum_of(Product(g, c) for g, c in zip(gens, v.witness.cofactors)), pts)
    return bool(total.equals(evaluate_points(f, pts)).all())


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 2))
def test_bezout_round_trip(seed, dim):
    rng = random.Random(seed)
    gens = [rand_nonzero_expr(rng, dim) for _ in range(rng.randint(1, 3))]
    f = sum_of(Product(rand_expr(rng, dim), g) for g in gens)
    w = Window(10, dim)
    v = ideal_member(f, gens, w)
    assert isinstance(v, Member)
    assert _bezout_identity_holds(f, gens, v, w)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 2))
def test_divides_round_trip(seed, dim):
    rng = random.Random(seed)
    g = rand_nonzero_expr(rng, dim)
    f = Product(g, rand_expr(rng, dim))
    w = Window(10, dim)
    v = divides(g, f, w)
    assert isinstance(v, Divides)
    pts = w.array()
    assert evaluate_points(Product(v.cofactor, g), pts).equals(evaluate_points(f, pts)).all()


def test_verdict_json_always_has_scope():
    w = Window(5, 1)
    verdicts = [
        divides(Const(1, 1), coord(1, 1), w),
        divides(DiracComplement((0,)), Const(1, 1), w),
        is_invertible(InvNormPower(2, 1), w),
        is_invertible(coord(1, 1), w),
        ideal_member(Const(1, 1), [coord(1, 1)], w),
        ideal_member(coord(1, 1), [coord(1, 1)], w),
        ideal_member(HalfRoot(Const(Fraction(1, 4), 1)), [Const(1, 1)], w),
    ]
    for v in verdicts:
        assert v.to_json()["scope"] in ("global", "window")
