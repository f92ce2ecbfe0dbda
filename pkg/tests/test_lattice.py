from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polygrowth.errors import DimensionMismatch
from polygrowth.lattice import (
    GaussianRational,
    Window,
    as_point,
    canonical_key,
    crosspolytope_count,
    norm1,
    root_lower,
    root_upper,
    sqrt_lower,
    sqrt_upper,
    unit_vector,
)


def brute_ball(dim, radius):
    pts = [p for p in product(range(-radius, radius + 1), repeat=dim) if norm1(p) <= radius]
    return sorted(pts, key=canonical_key)


def test_small_window_order():
    assert list(Window(1, 1)) == [(0,), (-1,), (1,)]
    assert list(Window(1, 2)) == [(0, 0), (-1, 0), (0, -1), (0, 1), (1, 0)]


@pytest.mark.parametrize("dim,radius", [(1, 0), (1, 7), (2, 5), (3, 4), (4, 2)])
def test_window_matches_brute_force(dim, radius):
    w = Window(radius, dim)
    assert list(w) == brute_ball(dim, radius)
    assert len(w) == len(brute_ball(dim, radius))


def test_crosspolytope_counts():
    # hand-counted: |{n in Z^2 : |n|_1 <= 2}| = 13, in Z^3 radius 2 it is 25
    assert crosspolytope_count(2, 1) == 5
    assert crosspolytope_count(2, 2) == 13
    assert crosspolytope_count(3, 2) == 25
    assert crosspolytope_count(3, 50) == 171801


def test_window_array_is_read_only():
    arr = Window(3, 2).array()
    with pytest.raises(ValueError):
        arr[0, 0] = 5


def test_window_rejects_bad_shapes():
    with pytest.raises(ValueError):
        Window(-1, 2)
    with pytest.raises(ValueError):
        Window(3, 0)
    assert (1, 1) in Window(2, 2)
    assert (2, 1) not in Window(2, 2)


def test_points_and_units():
    assert unit_vector(3, 1) == (1, 0, 0)
    assert unit_vector(3, 3) == (0, 0, 1)
    assert as_point([2, -1], 2) == (2, -1)
    with pytest.raises(DimensionMismatch):
        as_point([1, 2, 3], 2)
    with pytest.raises(DimensionMismatch):
        as_point([])


def test_gaussian_arithmetic():
    i = GaussianRational(0, 1)
    assert i * i == GaussianRational(-1)
    z = GaussianRational(Fraction(1, 2), Fraction(-3, 4))
    assert z * (1 / z) == GaussianRational(1)
    assert z.conjugate() == GaussianRational(Fraction(1, 2), Fraction(3, 4))
    assert z.sqmag() == Fraction(1, 4) + Fraction(9, 16)
    assert (z**3) == z * z * z
    assert GaussianRational(2) == 2
    assert not GaussianRational(0)


def test_gaussian_rejects_floats():
    with pytest.raises(TypeError):
        GaussianRational(0.5)


def test_gaussian_json_round_trip():
    z = GaussianRational(Fraction(-7, 3), 2)
    assert z.to_json() == {"re": "-7/3", "im": "2"}
    assert GaussianRational.from_json(z.to_json()) == z


rationals = st.fractions(min_value=0, max_value=10**6, max_denominator=10**4)


@given(rationals, st.integers(2, 5))
def test_root_bounds_bracket(q, k):
    lo, hi = root_lower(q, k), root_upper(q, k)
    assert lo**k <= q <= hi**k
    assert hi - lo <= Fraction(1, 2**40) * max(1, hi)


def test_exact_square_roots():
    assert sqrt_upper(Fraction(9, 4)) == Fraction(3, 2)
    assert sqrt_lower(Fraction(9, 4)) == Fraction(3, 2)
    assert root_upper(Fraction(27), 3) == 3
    assert sqrt_lower(Fraction(0)) == 0
