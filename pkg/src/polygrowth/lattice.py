"""Lattice points, windows and exact Gaussian-rational scalars."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, isqrt
from typing import Iterator, Union

import numpy as np

from . import _kernels
from .errors import DimensionMismatch

Point = tuple[int, ...]
Number = Union[int, Fraction, "GaussianRational"]


def norm1(n: Point) -> int:
    return sum(abs(c) for c in n)


def canonical_key(n: Point) -> tuple[int, Point]:
    """Sort key for the norm-then-lexicographic order used everywhere."""
    return (norm1(n), tuple(n))


def as_point(coords, dim: int | None = None) -> Point:
    p = tuple(int(c) for c in coords)
    if dim is not None and len(p) != dim:
        raise DimensionMismatch(f"point {list(p)} is not in Z^{dim}")
    if not p:
        raise DimensionMismatch("points need at least one coordinate")
    return p


def unit_vector(dim: int, i: int) -> Point:
    """e_i with 1-based index i, matching the coordinate naming n_1..n_d."""
    return tuple(1 if j == i - 1 else 0 for j in range(dim))


def crosspolytope_count(dim: int, radius: int) -> int:
    """Number of points n in Z^dim with ||n||_1 <= radius."""
    return sum(2**k * comb(dim, k) * comb(radius, k) for k in range(min(dim, radius) + 1))


@lru_cache(maxsize=32)
def _window_array(dim: int, radius: int) -> np.ndarray:
    pts = _kernels.window_points(dim, radius)
    pts.setflags(write=False)
    return pts


@dataclass(frozen=True)
class Window:
    """The finite ball {n : ||n||_1 <= radius} in Z^dim."""

    radius: int
    dim: int

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("window radius must be nonnegative")
        if self.dim < 1:
            raise ValueError("dimension must be at least 1")

    def array(self) -> np.ndarray:
        """All window points as an (N, dim) int64 array in canonical order."""
        return _window_array(self.dim, self.radius)

    def __iter__(self) -> Iterator[Point]:
        for row in self.array():
            yield tuple(int(c) for c in row)

    def __len__(self) -> int:
        return crosspolytope_count(self.dim, self.radius)

    def __contains__(self, n) -> bool:
        return len(n) == self.dim and norm1(n) <= self.radius


def enumerate_window(w: Window) -> Iterator[Point]:
    return iter(w)


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot make an exact rational from {x!r}")


@dataclass(frozen=True, slots=True)
class GaussianRational:
    """re + im*i with exact rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _to_fraction(self.re))
        object.__setattr__(self, "im", _to_fraction(self.im))

    @classmethod
    def of(cls, x) -> GaussianRational:
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact; pass re/im rationals")
        return cls(_to_fraction(x), Fraction(0))

    def __add__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.of(other))

    def __rsub__(self, other):
        return GaussianRational.of(other) - self

    def __mul__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.of(other)
        s = o.sqmag()
        if s == 0:
            raise ZeroDivisionError("division by the Gaussian rational 0")
        num = self * o.conjugate()
        return GaussianRational(num.re / s, num.im / s)

    def __rtruediv__(self, other):
        return GaussianRational.of(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return GaussianRational(1) / self**-k
        out, base = GaussianRational(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def sqmag(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return not self

    def to_json(self) -> dict:
        return {"re": str(self.re), "im": str(self.im)}

    @classmethod
    def from_json(cls, obj: dict) -> GaussianRational:
        return cls(Fraction(str(obj.get("re", "0"))), Fraction(str(obj.get("im", "0"))))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return f"GaussianRational({self.re})"
        return f"GaussianRational({self.re}, {self.im})"


def squared_magnitude(z: GaussianRational) -> Fraction:
    return GaussianRational.of(z).sqmag()


_ROOT_BITS = 64


def _iroot(x: int, k: int) -> int:
    """floor(x ** (1/k)) for x >= 0."""
    if x < 2 or k == 1:
        return x
    if k == 2:
        return isqrt(x)
    r = 1 << ((x.bit_length() + k - 1) // k)
    while True:
        s = ((k - 1) * r + x // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def root_upper(q: Fraction, k: int = 2) -> Fraction:
    """Rational r >= q ** (1/k); exact when q is a k-th power of a rational."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("root of a negative rational")
    p, d = q.numerator, q.denominator
    # q^(1/k) = (p d^(k-1))^(1/k) / d
    x = p * d ** (k - 1)
    r = _iroot(x, k)
    if r**k == x:
        return Fraction(r, d)
    return Fraction(_iroot(x << (k * _ROOT_BITS), k) + 1, d << _ROOT_BITS)


def root_lower(q: Fraction, k: int = 2) -> Fraction:
    """Rational r <= q ** (1/k), positive whenever q is."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("root of a negative rational")
    p, d = q.numerator, q.denominator
    x = p * d ** (k - 1)
    r = _iroot(x, k)
    if r**k == x or p == 0:
        return Fraction(r, d)
    bits = _ROOT_BITS
    while True:
        s = _iroot(x << (k * bits), k)
        if s > 0:
            return Fraction(s, d << bits)
        bits *= 2


def sqrt_upper(q: Fraction) -> Fraction:
    return root_upper(q, 2)


def sqrt_lower(q: Fraction) -> Fraction:
    return root_lower(q, 2)
