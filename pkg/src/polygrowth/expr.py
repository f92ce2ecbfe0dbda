"""Symbolic expressions for polynomial-growth functions on Z^d.

Every closed expression denotes a map Z^d -> C.  All nodes except
:class:`HalfRoot` evaluate exactly to :class:`GaussianRational` values;
``HalfRoot`` supports exact zero tests and approximate evaluation only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import lcm
from typing import ClassVar, Iterable, NamedTuple

import mpmath
import numpy as np

from . import _kernels
from ._vec import GArray, QArray, obj_full
from .errors import DimensionMismatch, HalfRootNotExact, ParseError
from .lattice import GaussianRational, Point, as_point, canonical_key, norm1

MAX_SERIAL_DEGREE = 64


def pattern_zero(m: Point, n: int) -> bool:
    """Whether m = 2^k e_1 + j e_i with k >= 0, 1 <= i <= d and 0 <= j <= k^(n+1)."""
    x1, rest = m[0], m[1:]
    off = [y for y in rest if y != 0]
    if len(off) > 1 or x1 <= 0:
        return False
    if off:
        y = off[0]
        if y < 0 or x1 & (x1 - 1):
            return False
        k = x1.bit_length() - 1
        return y <= k ** (n + 1)
    return any(x1 - 2**k <= k ** (n + 1) for k in range(x1.bit_length()))


# --------------------------------------------------------------------- nodes


class Expr:
    """Base class of the expression tree.  Nodes are immutable."""

    kind: ClassVar[str] = ""
    dim: int  # a field or property on every concrete node

    def children(self) -> tuple[Expr, ...]:
        return ()

    @cached_property
    def has_half_root(self) -> bool:
        return isinstance(self, HalfRoot) or any(c.has_half_root for c in self.children())

    @cached_property
    def has_quotient(self) -> bool:
        return isinstance(self, Quotient) or any(c.has_quotient for c in self.children())

    def _lift(self, other) -> Expr:
        if isinstance(other, Expr):
            return other
        return Const(GaussianRational.of(other), self.dim)

    def __add__(self, other):
        return Sum(self, self._lift(other))

    def __radd__(self, other):
        return Sum(self._lift(other), self)

    def __mul__(self, other):
        if isinstance(other, Expr):
            return Product(self, other)
        return ScalarMul(GaussianRational.of(other), self)

    def __rmul__(self, other):
        if isinstance(other, Expr):
            return Product(other, self)
        return ScalarMul(GaussianRational.of(other), self)

    def __neg__(self):
        return ScalarMul(GaussianRational(-1), self)

    def __sub__(self, other):
        return Sum(self, -self._lift(other))

    def __rsub__(self, other):
        return Sum(self._lift(other), -self)

    def _at(self, n: Point) -> GaussianRational:
        raise NotImplementedError

    def _on(self, ctx: _Ctx) -> GArray:
        raise NotImplementedError


def _check_dim(dim: int):
    if not isinstance(dim, int) or dim < 1:
        raise DimensionMismatch(f"dimension must be a positive integer, got {dim!r}")


def _same_dim(*exprs: Expr) -> int:
    dims = {e.dim for e in exprs}
    if len(dims) != 1:
        raise DimensionMismatch(f"cannot combine expressions of dimensions {sorted(dims)}")
    return dims.pop()


@dataclass(frozen=True)
class Const(Expr):
    value: GaussianRational
    dim: int
    kind: ClassVar[str] = "const"

    def __post_init__(self):
        object.__setattr__(self, "value", GaussianRational.of(self.value))
        _check_dim(self.dim)

    def _at(self, n):
        return self.value

    def _on(self, ctx):
        return GArray.const(self.value, ctx.size)


@dataclass(frozen=True)
class CoordPoly(Expr):
    """Polynomial in n_1..n_d; ``terms`` maps exponent tuples to coefficients."""

    terms: tuple
    dim: int
    kind: ClassVar[str] = "coord_poly"

    def __post_init__(self):
        _check_dim(self.dim)
        items = self.terms.items() if isinstance(self.terms, dict) else self.terms
        acc: dict[tuple[int, ...], GaussianRational] = {}
        for exps, c in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.dim:
                raise DimensionMismatch(f"monomial exponent {list(exps)} is not in dimension {self.dim}")
            if any(e < 0 for e in exps):
                raise ValueError("monomial exponents must be nonnegative")
            acc[exps] = acc.get(exps, GaussianRational(0)) + GaussianRational.of(c)
        terms = tuple(sorted(((e, c) for e, c in acc.items() if c), key=lambda t: (sum(t[0]), t[0])))
        object.__setattr__(self, "terms", terms)

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def _at(self, n):
        total = GaussianRational(0)
        for exps, c in self.terms:
            mono = 1
            for x, e in zip(n, exps):
                mono *= x**e
            total = total + c * mono
        return total

    def _on(self, ctx):
        size = ctx.size
        if not self.terms:
            return GArray.const(GaussianRational(0), size)
        L = lcm(*(lcm(c.re.denominator, c.im.denominator) for _, c in self.terms))
        re = obj_full(size, 0)
        im = obj_full(size, 0)
        for exps, c in self.terms:
            mono = obj_full(size, 1)
            for i, e in enumerate(exps):
                if e:
                    mono = mono * ctx.coord_power(i, e)
            cr = c.re.numerator * (L // c.re.denominator)
            ci = c.im.numerator * (L // c.im.denominator)
            if cr:
                re = re + cr * mono
            if ci:
                im = im + ci * mono
        return GArray(re, im, L)


@dataclass(frozen=True)
class Dirac(Expr):
    point: Point
    kind: ClassVar[str] = "dirac"

    def __post_init__(self):
        object.__setattr__(self, "point", as_point(self.point))

    @property
    def dim(self):
        return len(self.point)

    def _at(self, n):
        return GaussianRational(1 if n == self.point else 0)

    def _on(self, ctx):
        hit = ctx.match([self.point]) >= 0
        return GArray(np.where(hit, 1, 0).astype(object), obj_full(ctx.size, 0), 1, reduce=False)


@dataclass(frozen=True)
class DiracComplement(Expr):
    point: Point
    kind: ClassVar[str] = "dirac_complement"

    def __post_init__(self):
        object.__setattr__(self, "point", as_point(self.point))

    @property
    def dim(self):
        return len(self.point)

    def _at(self, n):
        return GaussianRational(0 if n == self.point else 1)

    def _on(self, ctx):
        hit = ctx.match([self.point]) >= 0
        return GArray(np.where(hit, 0, 1).astype(object), obj_full(ctx.size, 0), 1, reduce=False)


@dataclass(frozen=True)
class FiniteSupport(Expr):
    """Finitely many prescribed values, 0 elsewhere."""

    values: tuple
    dim: int
    kind: ClassVar[str] = "finite_support"

    def __post_init__(self):
        _check_dim(self.dim)
        items = self.values.items() if isinstance(self.values, dict) else self.values
        seen: dict[Point, GaussianRational] = {}
        for p, c in items:
            p = as_point(p, self.dim)
            if p in seen:
                raise ValueError(f"point {list(p)} listed twice")
            seen[p] = GaussianRational.of(c)
        vals = tuple(sorted(((p, c) for p, c in seen.items() if c), key=lambda t: canonical_key(t[0])))
        object.__setattr__(self, "values", vals)

    @cached_property
    def table(self) -> dict[Point, GaussianRational]:
        return dict(self.values)

    def _at(self, n):
        return self.table.get(n, GaussianRational(0))

    def _on(self, ctx):
        size = ctx.size
        if not self.values:
            return GArray.const(GaussianRational(0), size)
        idx = ctx.match([p for p, _ in self.values])
        L = lcm(*(lcm(c.re.denominator, c.im.denominator) for _, c in self.values))
        re_vals = np.array([c.re.numerator * (L // c.re.denominator) for _, c in self.values] + [0], dtype=object)
        im_vals = np.array([c.im.numerator * (L // c.im.denominator) for _, c in self.values] + [0], dtype=object)
        sel = np.where(idx >= 0, idx, len(self.values))
        return GArray(re_vals[sel], im_vals[sel], L)


@dataclass(frozen=True)
class PatternMask(Expr):
    """0 on {2^k e_1 + j e_i : k >= 0, 1 <= i <= d, 0 <= j <= k^(n+1)}, 1 elsewhere."""

    n: int
    dim: int
    kind: ClassVar[str] = "pattern_mask"

    def __post_init__(self):
        _check_dim(self.dim)
        if int(self.n) < 1:
            raise ValueError("pattern mask index must be a positive integer")

    def _at(self, p):
        return GaussianRational(0 if pattern_zero(p, self.n) else 1)

    def _on(self, ctx):
        z = _kernels.mask_zeros(ctx.pts, self.n)
        return GArray(np.where(z, 0, 1).astype(object), obj_full(ctx.size, 0), 1, reduce=False)


@dataclass(frozen=True)
class InvNormPower(Expr):
    """n -> 1/(1 + ||n||_1)^m."""

    m: int
    dim: int
    kind: ClassVar[str] = "inv_norm_power"

    def __post_init__(self):
        _check_dim(self.dim)
        if int(self.m) < 0:
            raise ValueError("exponent must be nonnegative")

    def _at(self, n):
        return GaussianRational(Fraction(1, (1 + norm1(n)) ** self.m))

    def _on(self, ctx):
        size = ctx.size
        return GArray(obj_full(size, 1), obj_full(size, 0), (1 + ctx.norms) ** self.m, reduce=False)


@dataclass(frozen=True)
class Sum(Expr):
    left: Expr
    right: Expr
    kind: ClassVar[str] = "sum"

    def __post_init__(self):
        _same_dim(self.left, self.right)

    @property
    def dim(self):
        return self.left.dim

    def children(self):
        return (self.left, self.right)

    def _at(self, n):
        return self.left._at(n) + self.right._at(n)

    def _on(self, ctx):
        return ctx.value(self.left) + ctx.value(self.right)


@dataclass(frozen=True)
class Product(Expr):
    left: Expr
    right: Expr
    kind: ClassVar[str] = "product"

    def __post_init__(self):
        _same_dim(self.left, self.right)

    @property
    def dim(self):
        return self.left.dim

    def children(self):
        return (self.left, self.right)

    def _at(self, n):
        return self.left._at(n) * self.right._at(n)

    def _on(self, ctx):
        return ctx.value(self.left) * ctx.value(self.right)


@dataclass(frozen=True)
class Conj(Expr):
    arg: Expr
    kind: ClassVar[str] = "conj"

    @property
    def dim(self):
        return self.arg.dim

    def children(self):
        return (self.arg,)

    def _at(self, n):
        return self.arg._at(n).conjugate()

    def _on(self, ctx):
        return ctx.value(self.arg).conj()


@dataclass(frozen=True)
class ScalarMul(Expr):
    scalar: GaussianRational
    arg: Expr
    kind: ClassVar[str] = "scalar_mul"

    def __post_init__(self):
        object.__setattr__(self, "scalar", GaussianRational.of(self.scalar))

    @property
    def dim(self):
        return self.arg.dim

    def children(self):
        return (self.arg,)

    def _at(self, n):
        return self.scalar * self.arg._at(n)

    def _on(self, ctx):
        return ctx.value(self.arg).scale(self.scalar)


@dataclass(frozen=True)
class Shift(Expr):
    """n -> arg(n - by)."""

    by: Point
    arg: Expr
    kind: ClassVar[str] = "shift"

    def __post_init__(self):
        object.__setattr__(self, "by", as_point(self.by, self.arg.dim))

    @property
    def dim(self):
        return self.arg.dim

    def children(self):
        return (self.arg,)

    def _at(self, n):
        return self.arg._at(tuple(a - b for a, b in zip(n, self.by)))

    def _on(self, ctx):
        return ctx.shifted(self.by).value(self.arg)


@dataclass(frozen=True)
class Quotient(Expr):
    """num/den where den != 0, and 0 where den vanishes."""

    num: Expr
    den: Expr
    kind: ClassVar[str] = "quotient"

    def __post_init__(self):
        _same_dim(self.num, self.den)

    @property
    def dim(self):
        return self.num.dim

    def children(self):
        return (self.num, self.den)

    def _at(self, n):
        d = self.den._at(n)
        if not d:
            return GaussianRational(0)
        return self.num._at(n) / d

    def _on(self, ctx):
        return ctx.value(self.num).divide_or_zero(ctx.value(self.den))


@dataclass(frozen=True)
class MagnitudeMaxSq(Expr):
    """n -> max_k |arg_k(n)|^2."""

    args: tuple
    kind: ClassVar[str] = "magnitude_max_sq"

    def __post_init__(self):
        args = tuple(self.args)
        if not args:
            raise ValueError("magnitude_max_sq needs at least one argument")
        _same_dim(*args)
        object.__setattr__(self, "args", args)

    @property
    def dim(self):
        return self.args[0].dim

    def children(self):
        return self.args

    def _at(self, n):
        return GaussianRational(max(a._at(n).sqmag() for a in self.args))

    def _on(self, ctx):
        return GArray.real(QArray.maximum([ctx.value(a).sqmag() for a in self.args]))


@dataclass(frozen=True)
class HalfRoot(Expr):
    """Square root with magnitude sqrt|arg| and half the phase in (-pi, pi]."""

    arg: Expr
    kind: ClassVar[str] = "half_root"

    @property
    def dim(self):
        return self.arg.dim

    def children(self):
        return (self.arg,)

    def _at(self, n):
        raise HalfRootNotExact("half_root has no exact value; use eval_approx")

    def _on(self, ctx):
        raise HalfRootNotExact("half_root has no exact value; use eval_approx")


# ---------------------------------------------------------- small builders


def const(c, dim: int) -> Const:
    return Const(GaussianRational.of(c), dim)


def coord(i: int, dim: int) -> CoordPoly:
    """The coordinate function n -> n_i (1-based)."""
    if not 1 <= i <= dim:
        raise DimensionMismatch(f"no coordinate {i} in dimension {dim}")
    return CoordPoly({tuple(1 if j == i - 1 else 0 for j in range(dim)): 1}, dim)


def poly(terms: dict, dim: int) -> CoordPoly:
    return CoordPoly(terms, dim)


def sum_of(exprs: Iterable[Expr]) -> Expr:
    return reduce(Sum, exprs)


def product_of(exprs: Iterable[Expr]) -> Expr:
    return reduce(Product, exprs)


# ------------------------------------------------------------ evaluation


class Evaluator:
    """Exact evaluation over a fixed array of points, caching every node it sees.

    Pass one evaluator to several calls (``evaluate_points``, ``zero_mask``,
    ``abs_power``) to share work between expressions with common subtrees.
    Nodes are cached by identity and kept alive by the cache.
    """

    def __init__(self, pts: np.ndarray):
        self.pts = np.ascontiguousarray(pts, dtype=np.int64)
        self.size = self.pts.shape[0]
        self._cache: dict[int, tuple[Expr, GArray]] = {}
        self._shifted: dict[Point, _Ctx] = {}
        self._powers: dict[tuple[int, int], np.ndarray] = {}
        self._norms = None

    def value(self, node: Expr) -> GArray:
        hit = self._cache.get(id(node))
        if hit is not None:
            return hit[1]
        val = node._on(self)
        self._cache[id(node)] = (node, val)
        return val

    def shifted(self, v: Point) -> _Ctx:
        ctx = self._shifted.get(v)
        if ctx is None:
            ctx = self._shifted[v] = Evaluator(self.pts - np.asarray(v, dtype=np.int64))
        return ctx

    def match(self, targets) -> np.ndarray:
        return _kernels.match_rows(self.pts, np.asarray(targets, dtype=np.int64).reshape(-1, self.pts.shape[1]))

    def coord_power(self, i: int, e: int) -> np.ndarray:
        key = (i, e)
        if key not in self._powers:
            self._powers[key] = self.pts[:, i].astype(object) ** e
        return self._powers[key]

    @property
    def norms(self) -> np.ndarray:
        if self._norms is None:
            self._norms = np.abs(self.pts).sum(axis=1).astype(object)
        return self._norms


_Ctx = Evaluator


def _context(f: Expr, pts) -> Evaluator:
    if isinstance(pts, Evaluator):
        if pts.pts.shape[1] != f.dim:
            raise DimensionMismatch(f"points of dimension {pts.pts.shape[1]} for an expression on Z^{f.dim}")
        return pts
    return Evaluator(_points_array(f, pts))


def _points_array(f: Expr, pts) -> np.ndarray:
    arr = np.asarray(pts, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, f.dim) if arr.size else arr.reshape(0, f.dim)
    if arr.shape[1] != f.dim:
        raise DimensionMismatch(f"points of dimension {arr.shape[1]} for an expression on Z^{f.dim}")
    return arr


def evaluate(f: Expr, n) -> GaussianRational:
    """Exact value f(n).  Structurally recursive, one point at a time."""
    p = as_point(n, f.dim)
    if f.has_half_root:
        raise HalfRootNotExact("expression contains half_root; use eval_approx")
    return f._at(p)


def evaluate_points(f: Expr, pts) -> GArray:
    """Exact values of f at every row of ``pts`` (vectorized)."""
    if f.has_half_root:
        raise HalfRootNotExact("expression contains half_root; use eval_approx")
    return _context(f, pts).value(f)


def _zero_mask(f: Expr, ctx: _Ctx) -> np.ndarray:
    if not f.has_half_root:
        return ctx.value(f).zero_mask()
    if isinstance(f, (HalfRoot, Conj)):
        return _zero_mask(f.arg, ctx)
    if isinstance(f, ScalarMul):
        if not f.scalar:
            return np.ones(ctx.size, dtype=bool)
        return _zero_mask(f.arg, ctx)
    if isinstance(f, Product):
        return _zero_mask(f.left, ctx) | _zero_mask(f.right, ctx)
    if isinstance(f, Quotient):
        return _zero_mask(f.num, ctx) | _zero_mask(f.den, ctx)
    if isinstance(f, MagnitudeMaxSq):
        out = np.ones(ctx.size, dtype=bool)
        for a in f.args:
            out &= _zero_mask(a, ctx)
        return out
    if isinstance(f, Shift):
        return _zero_mask(f.arg, ctx.shifted(f.by))
    raise HalfRootNotExact(f"cannot decide zeros of a {f.kind} over half_root terms exactly")


def zero_mask(f: Expr, pts) -> np.ndarray:
    """Exact zero test at each row of ``pts``; half_root zeros are those of its argument."""
    return _zero_mask(f, _context(f, pts))


def is_zero_at(f: Expr, n) -> bool:
    p = as_point(n, f.dim)
    if not f.has_half_root:
        return not f._at(p)
    return bool(zero_mask(f, [p])[0])


def _abs_power(f: Expr, ctx: _Ctx) -> tuple[QArray, int]:
    if not f.has_half_root:
        return ctx.value(f).sqmag(), 2
    if isinstance(f, HalfRoot):
        q, p = _abs_power(f.arg, ctx)
        return q, 2 * p
    if isinstance(f, Conj):
        return _abs_power(f.arg, ctx)
    if isinstance(f, Shift):
        return _abs_power(f.arg, ctx.shifted(f.by))
    if isinstance(f, ScalarMul):
        q, p = _abs_power(f.arg, ctx)
        P = p if p % 2 == 0 else 2 * p
        c = QArray.const(f.scalar.sqmag() ** (P // 2), ctx.size)
        return (q ** (P // p)) * c, P
    if isinstance(f, (Product, Quotient)):
        a, b = f.children()
        qa, pa = _abs_power(a, ctx)
        qb, pb = _abs_power(b, ctx)
        P = lcm(pa, pb)
        qa, qb = qa ** (P // pa), qb ** (P // pb)
        if isinstance(f, Quotient):
            qb = qb.reciprocal()
        return qa * qb, P
    if isinstance(f, MagnitudeMaxSq):
        parts = [_abs_power(a, ctx) for a in f.args]
        P = lcm(2, *(p for _, p in parts))
        return QArray.maximum([q ** (P // p) for q, p in parts]), P // 2
    raise HalfRootNotExact(f"cannot bound |{f.kind}| exactly over half_root terms")


def abs_power(f: Expr, pts) -> tuple[QArray, int]:
    """(Q, p) with Q = |f|^p exactly at each row of ``pts``.

    p = 2 for half_root-free expressions; each half_root level doubles it.
    """
    return _abs_power(f, _context(f, pts))


class Approx(NamedTuple):
    value: mpmath.mpc
    rel_error: mpmath.mpf


def _to_mpc(z: GaussianRational) -> mpmath.mpc:
    re = mpmath.mpf(z.re.numerator) / z.re.denominator
    im = mpmath.mpf(z.im.numerator) / z.im.denominator
    return mpmath.mpc(re, im)


def _approx(f: Expr, n: Point) -> mpmath.mpc:
    if not f.has_half_root:
        return _to_mpc(f._at(n))
    if isinstance(f, HalfRoot):
        return mpmath.sqrt(_approx(f.arg, n))
    if isinstance(f, Sum):
        return _approx(f.left, n) + _approx(f.right, n)
    if isinstance(f, Product):
        return _approx(f.left, n) * _approx(f.right, n)
    if isinstance(f, Conj):
        return mpmath.conj(_approx(f.arg, n))
    if isinstance(f, ScalarMul):
        return _to_mpc(f.scalar) * _approx(f.arg, n)
    if isinstance(f, Shift):
        return _approx(f.arg, tuple(a - b for a, b in zip(n, f.by)))
    if isinstance(f, Quotient):
        if is_zero_at(f.den, n):
            return mpmath.mpc(0)
        return _approx(f.num, n) / _approx(f.den, n)
    if isinstance(f, MagnitudeMaxSq):
        return mpmath.mpc(max(abs(_approx(a, n)) ** 2 for a in f.args))
    raise TypeError(f"unexpected node {f!r}")


def eval_approx(f: Expr, n, precision_bits: int = 128) -> Approx:
    """Numeric value of f(n) to within relative error 2^-precision_bits."""
    if precision_bits < 1:
        raise ValueError("precision_bits must be positive")
    p = as_point(n, f.dim)
    with mpmath.workprec(precision_bits + 32):
        val = _approx(f, p)
    return Approx(val, mpmath.mpf(2) ** -precision_bits)


# ------------------------------------------------------------- zero sets


@dataclass(frozen=True)
class ExactFinite:
    """f vanishes exactly on ``points``."""

    points: frozenset

    def contains(self, n: Point) -> bool:
        return tuple(n) in self.points


@dataclass(frozen=True)
class ExactCofinite:
    """f vanishes everywhere except on ``points``."""

    points: frozenset

    def contains(self, n: Point) -> bool:
        return tuple(n) not in self.points


@dataclass(frozen=True)
class Pattern:
    """Zero set of the pattern mask with index ``n``."""

    n: int
    dim: int

    def contains(self, p: Point) -> bool:
        return pattern_zero(tuple(p), self.n)


@dataclass(frozen=True)
class Unknown:
    def contains(self, n: Point) -> bool:
        raise ValueError("zero set is not known exactly")


ZeroSetInfo = ExactFinite | ExactCofinite | Pattern | Unknown
EVERYWHERE = ExactCofinite(frozenset())
NOWHERE = ExactFinite(frozenset())


def is_exact(z) -> bool:
    return not isinstance(z, Unknown)


def _union(a, b):
    if isinstance(a, Unknown) or isinstance(b, Unknown):
        return Unknown()
    if isinstance(a, ExactFinite) and isinstance(b, ExactFinite):
        return ExactFinite(a.points | b.points)
    if isinstance(a, ExactCofinite) and isinstance(b, ExactCofinite):
        return ExactCofinite(a.points & b.points)
    if isinstance(b, ExactCofinite) and not isinstance(a, ExactCofinite):
        a, b = b, a
    if isinstance(a, ExactCofinite):
        return ExactCofinite(frozenset(p for p in a.points if not b.contains(p)))
    if isinstance(a, Pattern) and isinstance(b, Pattern):
        return Pattern(max(a.n, b.n), a.dim)
    pat, fin = (a, b) if isinstance(a, Pattern) else (b, a)
    if all(pat.contains(p) for p in fin.points):
        return pat
    return Unknown()


def _intersection(a, b):
    if isinstance(a, Unknown) or isinstance(b, Unknown):
        return Unknown()
    if isinstance(a, ExactFinite) and isinstance(b, ExactFinite):
        return ExactFinite(a.points & b.points)
    if isinstance(a, ExactCofinite) and isinstance(b, ExactCofinite):
        return ExactCofinite(a.points | b.points)
    if isinstance(b, ExactFinite):
        a, b = b, a
    if isinstance(a, ExactFinite):
        return ExactFinite(frozenset(p for p in a.points if b.contains(p)))
    if isinstance(a, Pattern) and isinstance(b, Pattern):
        return Pattern(min(a.n, b.n), a.dim)
    pat, cof = (a, b) if isinstance(a, Pattern) else (b, a)
    if not any(pat.contains(p) for p in cof.points):
        return pat
    return Unknown()


def _translate(z, v: Point):
    def mv(pts):
        return frozenset(tuple(a + b for a, b in zip(p, v)) for p in pts)

    if isinstance(z, ExactFinite):
        return ExactFinite(mv(z.points))
    if isinstance(z, ExactCofinite):
        return ExactCofinite(mv(z.points))
    return Unknown() if any(v) else z


def _patched_sum(f: Sum):
    # a finitely supported summand only changes the other summand's zero set on its support
    za, zb = zero_set(f.left), zero_set(f.right)
    for patch, other in ((za, zb), (zb, za)):
        if isinstance(patch, ExactCofinite) and isinstance(other, (ExactFinite, ExactCofinite)):
            if f.has_half_root:
                return Unknown()
            touched = {p for p in patch.points if not f._at(p)}
            if isinstance(other, ExactFinite):
                return ExactFinite(frozenset((other.points - patch.points) | touched))
            nonzero = (other.points | patch.points) - touched
            return ExactCofinite(frozenset(nonzero))
    return Unknown()


def zero_set(f: Expr):
    """Structural zero-set information; Unknown when no rule applies."""
    if isinstance(f, Const):
        return NOWHERE if f.value else EVERYWHERE
    if isinstance(f, CoordPoly):
        if not f.terms:
            return EVERYWHERE
        if f.degree == 0:
            return NOWHERE
        return Unknown()
    if isinstance(f, Dirac):
        return ExactCofinite(frozenset([f.point]))
    if isinstance(f, DiracComplement):
        return ExactFinite(frozenset([f.point]))
    if isinstance(f, FiniteSupport):
        return ExactCofinite(frozenset(p for p, _ in f.values))
    if isinstance(f, PatternMask):
        return Pattern(f.n, f.dim)
    if isinstance(f, InvNormPower):
        return NOWHERE
    if isinstance(f, (Conj, HalfRoot)):
        return zero_set(f.arg)
    if isinstance(f, ScalarMul):
        return zero_set(f.arg) if f.scalar else EVERYWHERE
    if isinstance(f, Shift):
        return _translate(zero_set(f.arg), f.by)
    if isinstance(f, Product):
        return _union(zero_set(f.left), zero_set(f.right))
    if isinstance(f, Quotient):
        return _union(zero_set(f.num), zero_set(f.den))
    if isinstance(f, MagnitudeMaxSq):
        return reduce(_intersection, (zero_set(a) for a in f.args))
    if isinstance(f, Sum):
        return _patched_sum(f)
    return Unknown()


def zero_set_to_json(z) -> dict:
    if isinstance(z, ExactFinite):
        return {"type": "exact_finite", "points": [list(p) for p in sorted(z.points, key=canonical_key)]}
    if isinstance(z, ExactCofinite):
        return {"type": "exact_cofinite", "nonzero_points": [list(p) for p in sorted(z.points, key=canonical_key)]}
    if isinstance(z, Pattern):
        return {"type": "pattern", "n": z.n}
    return {"type": "unknown"}


# --------------------------------------------------------- serialization


def _rat(c: GaussianRational) -> dict:
    return {"re": str(c.re), "im": str(c.im)}


def to_json(f: Expr) -> dict:
    """Canonical JSON-ready AST of f (without the ambient dimension)."""
    if isinstance(f, Const):
        return {"kind": f.kind, **_rat(f.value)}
    if isinstance(f, CoordPoly):
        if f.degree > MAX_SERIAL_DEGREE:
            raise ValueError(f"polynomial degree {f.degree} exceeds the serialization cap {MAX_SERIAL_DEGREE}")
        return {"kind": f.kind, "terms": [{"exp": list(e), **_rat(c)} for e, c in f.terms]}
    if isinstance(f, (Dirac, DiracComplement)):
        return {"kind": f.kind, "point": list(f.point)}
    if isinstance(f, FiniteSupport):
        return {"kind": f.kind, "values": [{"point": list(p), **_rat(c)} for p, c in f.values]}
    if isinstance(f, PatternMask):
        return {"kind": f.kind, "n": f.n}
    if isinstance(f, InvNormPower):
        return {"kind": f.kind, "m": f.m}
    if isinstance(f, (Sum, Product)):
        return {"kind": f.kind, "left": to_json(f.left), "right": to_json(f.right)}
    if isinstance(f, (Conj, HalfRoot)):
        return {"kind": f.kind, "arg": to_json(f.arg)}
    if isinstance(f, ScalarMul):
        return {"kind": f.kind, **_rat(f.scalar), "arg": to_json(f.arg)}
    if isinstance(f, Shift):
        return {"kind": f.kind, "by": list(f.by), "arg": to_json(f.arg)}
    if isinstance(f, Quotient):
        return {"kind": f.kind, "num": to_json(f.num), "den": to_json(f.den)}
    if isinstance(f, MagnitudeMaxSq):
        return {"kind": f.kind, "args": [to_json(a) for a in f.args]}
    raise TypeError(f"unknown node {f!r}")


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def serialize(f: Expr, with_dim: bool = True) -> str:
    """Canonical JSON text; by default wrapped as {"dim": d, "expr": ...}."""
    node = to_json(f)
    return dumps_canonical({"dim": f.dim, "expr": node} if with_dim else node)


def _need(obj, key, loc):
    if not isinstance(obj, dict):
        raise ParseError("expected an object", loc)
    if key not in obj:
        raise ParseError(f"missing field {key!r}", loc)
    return obj[key]


def _parse_rat(obj, loc) -> GaussianRational:
    try:
        return GaussianRational(Fraction(str(obj.get("re", "0"))), Fraction(str(obj.get("im", "0"))))
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise ParseError(f"bad rational ({e})", loc) from None


def _parse_point(obj, dim, loc) -> Point:
    if not isinstance(obj, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in obj):
        raise ParseError("a point must be a JSON array of integers", loc)
    if len(obj) != dim:
        raise ParseError(f"point has {len(obj)} coordinates, expected {dim}", loc)
    return tuple(obj)


def _parse_int(obj, key, loc, low) -> int:
    v = _need(obj, key, loc)
    if not isinstance(v, int) or isinstance(v, bool) or v < low:
        raise ParseError(f"field {key!r} must be an integer >= {low}", f"{loc}/{key}")
    return v


def from_json(obj, dim: int, loc: str = "") -> Expr:
    kind = _need(obj, "kind", loc or "/")
    try:
        if kind == "const":
            return Const(_parse_rat(obj, loc), dim)
        if kind == "coord_poly":
            terms = _need(obj, "terms", loc)
            if not isinstance(terms, list):
                raise ParseError("terms must be a list", f"{loc}/terms")
            parsed = []
            for i, t in enumerate(terms):
                tl = f"{loc}/terms/{i}"
                exps = _need(t, "exp", tl)
                if not isinstance(exps, list) or len(exps) != dim or not all(isinstance(e, int) and e >= 0 for e in exps):
                    raise ParseError(f"exp must be {dim} nonnegative integers", f"{tl}/exp")
                parsed.append((tuple(exps), _parse_rat(t, tl)))
            if any(sum(e) > MAX_SERIAL_DEGREE for e, _ in parsed):
                raise ParseError(f"total degree exceeds {MAX_SERIAL_DEGREE}", f"{loc}/terms")
            merged: dict = {}
            for e, c in parsed:
                merged[e] = merged.get(e, GaussianRational(0)) + c
            return CoordPoly(merged, dim)
        if kind in ("dirac", "dirac_complement"):
            p = _parse_point(_need(obj, "point", loc), dim, f"{loc}/point")
            return Dirac(p) if kind == "dirac" else DiracComplement(p)
        if kind == "finite_support":
            vals = _need(obj, "values", loc)
            if not isinstance(vals, list):
                raise ParseError("values must be a list", f"{loc}/values")
            table: dict = {}
            for i, v in enumerate(vals):
                vl = f"{loc}/values/{i}"
                p = _parse_point(_need(v, "point", vl), dim, f"{vl}/point")
                if p in table:
                    raise ParseError(f"duplicate point {list(p)}", vl)
                table[p] = _parse_rat(v, vl)
            return FiniteSupport(table, dim)
        if kind == "pattern_mask":
            return PatternMask(_parse_int(obj, "n", loc, 1), dim)
        if kind == "inv_norm_power":
            return InvNormPower(_parse_int(obj, "m", loc, 0), dim)
        if kind in ("sum", "product"):
            left = from_json(_need(obj, "left", loc), dim, f"{loc}/left")
            right = from_json(_need(obj, "right", loc), dim, f"{loc}/right")
            return Sum(left, right) if kind == "sum" else Product(left, right)
        if kind in ("conj", "half_root"):
            arg = from_json(_need(obj, "arg", loc), dim, f"{loc}/arg")
            return Conj(arg) if kind == "conj" else HalfRoot(arg)
        if kind == "scalar_mul":
            return ScalarMul(_parse_rat(obj, loc), from_json(_need(obj, "arg", loc), dim, f"{loc}/arg"))
        if kind == "shift":
            by = _parse_point(_need(obj, "by", loc), dim, f"{loc}/by")
            return Shift(by, from_json(_need(obj, "arg", loc), dim, f"{loc}/arg"))
        if kind == "quotient":
            num = from_json(_need(obj, "num", loc), dim, f"{loc}/num")
            den = from_json(_need(obj, "den", loc), dim, f"{loc}/den")
            return Quotient(num, den)
        if kind == "magnitude_max_sq":
            args = _need(obj, "args", loc)
            if not isinstance(args, list) or not args:
                raise ParseError("args must be a nonempty list", f"{loc}/args")
            return MagnitudeMaxSq(tuple(from_json(a, dim, f"{loc}/args/{i}") for i, a in enumerate(args)))
    except (DimensionMismatch, ValueError) as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(str(e), loc or "/") from None
    raise ParseError(f"unknown node kind {kind!r}", f"{loc}/kind")


def parse(data, dim: int | None = None) -> Expr:
    """Parse a JSON document (text or decoded) into an expression.

    Accepts either {"dim": d, "expr": node} or a bare node together with ``dim``.
    """
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg} (line {e.lineno} column {e.colno})", "/") from None
    if isinstance(data, dict) and "expr" in data:
        doc_dim = data.get("dim")
        if not isinstance(doc_dim, int) or isinstance(doc_dim, bool) or doc_dim < 1:
            raise ParseError("dim must be a positive integer", "/dim")
        if dim is not None and dim != doc_dim:
            raise DimensionMismatch(f"document has dimension {doc_dim}, expected {dim}")
        return from_json(data["expr"], doc_dim, "/expr")
    if dim is None:
        raise ParseError("bare expression node needs an ambient dimension", "/")
    return from_json(data, dim, "")
