"""Exact rational and Gaussian-rational arrays.

Values are stored as numpy object arrays of Python ints: a rational array is
``num / den`` and a Gaussian array is ``(re + i*im) / den`` with ``den > 0``.
``den`` is either an object array or, in the common uniform case, a plain
Python int; only per-point denominators (which appear after division) are
ever gcd-reduced.  This keeps window-wide evaluation exact while avoiding one
``Fraction`` object per entry.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np

from .lattice import GaussianRational

# scalar denominators above this size get normalized against the numerators
_SCALAR_DEN_LIMIT = 1 << 256


def obj_full(n: int, value: int) -> np.ndarray:
    out = np.empty(n, dtype=object)
    out.fill(value)
    return out


def _is_scalar(den) -> bool:
    return not isinstance(den, np.ndarray)


def _reduce(*parts):
    """Divide numerators and denominator (last part) by their common gcd."""
    den = parts[-1]
    if _is_scalar(den):
        if den < _SCALAR_DEN_LIMIT:
            return parts
        g = den
        for p in parts[:-1]:
            g = int(np.gcd.reduce(np.append(p, g)))
            if g == 1:
                return parts
        return tuple(p // g for p in parts[:-1]) + (den // g,)
    g = den
    for p in parts[:-1]:
        g = np.gcd(g, p)
    if (g == 1).all():
        return parts
    return tuple(p // g for p in parts)


def _den_at(den, i: int) -> int:
    return int(den) if _is_scalar(den) else int(den[i])


def _den_take(den, idx):
    return den if _is_scalar(den) else den[idx]


class QArray:
    """Array of exact rationals num/den."""

    __slots__ = ("num", "den")

    def __init__(self, num: np.ndarray, den, reduce: bool = True):
        if reduce:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    @classmethod
    def const(cls, q: Fraction, n: int) -> QArray:
        q = Fraction(q)
        return cls(obj_full(n, q.numerator), q.denominator, reduce=False)

    def __len__(self):
        return len(self.num)

    def __mul__(self, other: QArray) -> QArray:
        return QArray(self.num * other.num, self.den * other.den)

    def __add__(self, other: QArray) -> QArray:
        if _is_scalar(self.den) and _is_scalar(other.den):
            L = lcm(self.den, other.den)
            return QArray(self.num * (L // self.den) + other.num * (L // other.den), L)
        return QArray(self.num * other.den + other.num * self.den, self.den * other.den)

    def __pow__(self, k: int) -> QArray:
        if k == 1:
            return self
        return QArray(self.num**k, self.den**k, reduce=False)

    def le(self, other: QArray) -> np.ndarray:
        return (self.num * other.den <= other.num * self.den).astype(bool)

    def lt(self, other: QArray) -> np.ndarray:
        return (self.num * other.den < other.num * self.den).astype(bool)

    def zero_mask(self) -> np.ndarray:
        return (self.num == 0).astype(bool)

    def dens(self) -> np.ndarray:
        return obj_full(len(self.num), self.den) if _is_scalar(self.den) else self.den

    def reciprocal(self) -> QArray:
        """1/x where x != 0, and 0 where x == 0."""
        z = self.zero_mask()
        num = np.where(z, 0, self.dens())
        den = np.where(z, 1, self.num)
        neg = (den < 0).astype(bool)
        num = np.where(neg, -num, num)
        den = np.where(neg, -den, den)
        return QArray(num.astype(object), den.astype(object), reduce=False)

    def take(self, idx) -> QArray:
        return QArray(self.num[idx], _den_take(self.den, idx), reduce=False)

    def item(self, i: int) -> Fraction:
        return Fraction(int(self.num[i]), _den_at(self.den, i))

    def argmax(self) -> int:
        """Index of the first maximal entry."""
        if _is_scalar(self.den):
            return int(np.argmax(self.num))  # object argmax returns the first maximum
        best = 0
        num, den = self.num, self.den
        bn, bd = num[0], den[0]
        for i in range(1, len(num)):
            if num[i] * bd > bn * den[i]:
                best, bn, bd = i, num[i], den[i]
        return best

    def max(self) -> Fraction:
        if len(self.num) == 0:
            return Fraction(0)
        return self.item(self.argmax())

    @staticmethod
    def maximum(arrays: list[QArray]) -> QArray:
        out = arrays[0]
        for a in arrays[1:]:
            pick = out.lt(a)
            if _is_scalar(a.den) and _is_scalar(out.den) and a.den == out.den:
                out = QArray(np.where(pick, a.num, out.num), out.den, reduce=False)
            else:
                out = QArray(np.where(pick, a.num, out.num), np.where(pick, a.dens(), out.dens()), reduce=False)
        return out


class GArray:
    """Array of Gaussian rationals (re + i*im)/den."""

    __slots__ = ("re", "im", "den")

    def __init__(self, re: np.ndarray, im: np.ndarray, den, reduce: bool = True):
        if reduce:
            re, im, den = _reduce(re, im, den)
        self.re = re
        self.im = im
        self.den = den

    @staticmethod
    def _parts(c: GaussianRational) -> tuple[int, int, int]:
        L = lcm(c.re.denominator, c.im.denominator)
        return c.re.numerator * (L // c.re.denominator), c.im.numerator * (L // c.im.denominator), L

    @classmethod
    def const(cls, c: GaussianRational, n: int) -> GArray:
        cr, ci, L = cls._parts(c)
        return cls(obj_full(n, cr), obj_full(n, ci), L, reduce=False)

    @classmethod
    def real(cls, q: QArray) -> GArray:
        return cls(q.num, obj_full(len(q.num), 0), q.den, reduce=False)

    def __len__(self):
        return len(self.re)

    def __add__(self, o: GArray) -> GArray:
        if _is_scalar(self.den) and _is_scalar(o.den):
            L = lcm(self.den, o.den)
            a, b = L // self.den, L // o.den
            return GArray(self.re * a + o.re * b, self.im * a + o.im * b, L)
        if self.den is o.den:
            return GArray(self.re + o.re, self.im + o.im, self.den, reduce=False)
        if _is_scalar(self.den) or _is_scalar(o.den):
            # the array denominator absorbs the scalar one without a gcd pass
            return GArray(self.re * o.den + o.re * self.den, self.im * o.den + o.im * self.den, self.den * o.den, reduce=False)
        return GArray(self.re * o.den + o.re * self.den, self.im * o.den + o.im * self.den, self.den * o.den)

    def __mul__(self, o: GArray) -> GArray:
        both = not (_is_scalar(self.den) or _is_scalar(o.den))
        return GArray(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re, self.den * o.den, reduce=both)

    def __neg__(self) -> GArray:
        return GArray(-self.re, -self.im, self.den, reduce=False)

    def conj(self) -> GArray:
        return GArray(self.re, -self.im, self.den, reduce=False)

    def scale(self, c: GaussianRational) -> GArray:
        cr, ci, L = self._parts(c)
        if ci == 0:
            return GArray(self.re * cr, self.im * cr, self.den * L)
        return GArray(self.re * cr - self.im * ci, self.re * ci + self.im * cr, self.den * L)

    def sqmag(self) -> QArray:
        return QArray(self.re * self.re + self.im * self.im, self.den * self.den)

    def zero_mask(self) -> np.ndarray:
        return ((self.re == 0) & (self.im == 0)).astype(bool)

    def divide_or_zero(self, o: GArray) -> GArray:
        """self/o where o != 0, and 0 where o == 0."""
        z = o.zero_mask()
        # (a+bi)/q / ((c+di)/s) = (a+bi)(c-di) s / ((c^2+d^2) q)
        s2 = o.re * o.re + o.im * o.im
        re = (self.re * o.re + self.im * o.im) * o.den
        im = (self.im * o.re - self.re * o.im) * o.den
        den = s2 * self.den
        re = np.where(z, 0, re)
        im = np.where(z, 0, im)
        den = np.where(z, 1, den)
        return GArray(re.astype(object), im.astype(object), den.astype(object))

    def equals(self, o: GArray) -> np.ndarray:
        return ((self.re * o.den == o.re * self.den) & (self.im * o.den == o.im * self.den)).astype(bool)

    def take(self, idx) -> GArray:
        return GArray(self.re[idx], self.im[idx], _den_take(self.den, idx), reduce=False)

    def item(self, i: int) -> GaussianRational:
        d = _den_at(self.den, i)
        return GaussianRational(Fraction(int(self.re[i]), d), Fraction(int(self.im[i]), d))

    def items(self) -> list[GaussianRational]:
        return [self.item(i) for i in range(len(self))]

