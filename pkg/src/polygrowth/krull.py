"""Zero orders along coordinate rays, the pattern masks f_n and the sets i_*, i_n, M_n.

For f and a point x, the zero order is the shortest run of consecutive
zeros of f starting at x and stepping along +e_k, minimized over k (0 when
f(x) != 0).  Runs are capped, so an infinite order shows up as AtLeast(cap).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import BudgetExceeded
from .expr import (
    Conj,
    Const,
    CoordPoly,
    Dirac,
    Expr,
    ExactCofinite,
    ExactFinite,
    FiniteSupport,
    HalfRoot,
    Pattern,
    PatternMask,
    Product,
    ScalarMul,
    Sum,
    is_zero_at,
    zero_mask,
    zero_set,
)
from .growth import infer_lower
from .lattice import Point, as_point, norm1, unit_vector

DEFAULT_CAP = 4096
DEFAULT_K = 12
DEFAULT_BUDGET = 1 << 20


@dataclass(frozen=True, order=True)
class ZeroOrder:
    value: int
    at_least: bool = False

    def to_json(self) -> dict:
        return {"kind": "at_least" if self.at_least else "finite", "value": self.value}


def pattern_mask(n: int, dim: int = 1) -> PatternMask:
    return PatternMask(n, dim)


def _mask_index(f: Expr) -> int | None:
    """n when f is f_n up to a nonzero scalar, conjugation or half_root."""
    if isinstance(f, PatternMask):
        return f.n
    if isinstance(f, (Conj, HalfRoot)):
        return _mask_index(f.arg)
    if isinstance(f, ScalarMul) and f.scalar:
        return _mask_index(f.arg)
    return None


def _ray_run(f: Expr, start: Point, axis: int, cap: int) -> int:
    """Length of the zero run of f from start along +e_axis, at most cap."""
    done = 0
    block = 64
    while done < cap:
        size = min(block, cap - done)
        pts = np.tile(np.asarray(start, dtype=np.int64), (size, 1))
        pts[:, axis] += np.arange(done, done + size, dtype=np.int64)
        zeros = zero_mask(f, pts)
        if not zeros.all():
            return done + int(np.argmin(zeros))
        done += size
        block *= 2
    return cap


def zero_order(f: Expr, n, cap: int = DEFAULT_CAP) -> ZeroOrder:
    if cap < 1:
        raise ValueError("cap must be positive")
    p = as_point(n, f.dim)
    if not is_zero_at(f, p):
        return ZeroOrder(0)
    idx = _mask_index(f)
    if idx is not None:
        runs = [int(r) for r in _kernels.mask_runs(np.asarray(p, dtype=np.int64), idx, cap)]
    else:
        runs = []
        for axis in range(f.dim):
            runs.append(_ray_run(f, p, axis, cap if not runs else min(runs)))
    m = min(runs)
    return ZeroOrder(m, at_least=m >= cap)


def check_P1(f: Expr, g: Expr, n, cap: int = DEFAULT_CAP) -> bool:
    """m(f+g, n) >= min(m(f, n), m(g, n)), with AtLeast(c) read as c."""
    s = zero_order(Sum(f, g), n, cap).value
    return s >= min(zero_order(f, n, cap).value, zero_order(g, n, cap).value)


def check_P2(f: Expr, g: Expr, n, cap: int = DEFAULT_CAP) -> bool:
    """m(fg, n) >= max(m(f, n), m(g, n)), with AtLeast(c) read as c."""
    s = zero_order(Product(f, g), n, cap).value
    return s >= max(zero_order(f, n, cap).value, zero_order(g, n, cap).value)


# ------------------------------------------------------------ memberships


@dataclass(frozen=True)
class KrullSetVerdict:
    set_name: str  # i_star | i_n | M_n
    n: int | None
    verdict: str  # certified_in | certified_out | empirical_in | empirical_out
    reason: str = ""
    trend: tuple = field(default=())

    @property
    def inside(self) -> bool:
        return self.verdict.endswith("_in")

    @property
    def certified(self) -> bool:
        return self.verdict.startswith("certified")

    @property
    def decided(self) -> bool:
        return self.certified

    @property
    def scope(self) -> str:
        return "global" if self.certified else "window"

    def to_json(self) -> dict:
        return {
            "set": self.set_name,
            "n": self.n,
            "verdict": self.verdict,
            "scope": self.scope,
            "reason": self.reason,
            "trend": [dict(t) for t in self.trend],
        }


def _dyadic(k: int, dim: int) -> Point:
    return tuple(2**k if i == 0 else 0 for i in range(dim))


def _pattern_of(f: Expr) -> int | None:
    z = zero_set(f)
    return z.n if isinstance(z, Pattern) else None


def _i_star(f: Expr) -> tuple[str, str] | None:
    """Structural answer for i_*, as (verdict, reason)."""
    z = zero_set(f)
    if isinstance(z, Pattern):
        return "in", "every dyadic point 2^k e_1 is a zero of the mask pattern"
    if isinstance(z, ExactCofinite):
        return "in", "f vanishes off a finite set"
    if isinstance(z, ExactFinite):
        return "out", "f has finitely many zeros, so f(2^k e_1) != 0 for large k"
    if infer_lower(f) is not None:
        return "out", "f is bounded below structurally"
    if isinstance(f, Product):
        for part in (f.left, f.right):
            r = _i_star(part)
            if r and r[0] == "in":
                return "in", "a factor lies in the ideal"
    if isinstance(f, Sum):
        a, b = _i_star(f.left), _i_star(f.right)
        if a and b and a[0] == b[0] == "in":
            return "in", "both summands lie in the ideal"
    if isinstance(f, (Conj, HalfRoot)) or (isinstance(f, ScalarMul) and f.scalar):
        return _i_star(f.arg)
    return None


def _orders(f: Expr, K: int) -> list[ZeroOrder]:
    cap = 2**K
    return [zero_order(f, _dyadic(k, f.dim), cap) for k in range(1, K + 1)]


def membership_i_star(f: Expr, K: int = DEFAULT_K) -> KrullSetVerdict:
    if K < 1:
        raise ValueError("probe horizon K must be at least 1")
    r = _i_star(f)
    if r is not None:
        return KrullSetVerdict("i_star", None, f"certified_{r[0]}", r[1])
    vals = [(k, is_zero_at(f, _dyadic(k, f.dim))) for k in range(1, K + 1)]
    trend = tuple((("k", k), ("zero", z)) for k, z in vals)
    tail = [z for k, z in vals[len(vals) // 2 :]]
    verdict = "empirical_in" if all(tail) else "empirical_out"
    return KrullSetVerdict("i_star", None, verdict, "dyadic probes on the horizon", trend)


def _i_n(f: Expr, n: int) -> tuple[str, str] | None:
    p = _pattern_of(f)
    if p is not None:
        if p >= n:
            return "in", f"zero orders grow like k^{p + 1}, faster than k^{n}"
        return "out", f"zero orders grow like k^{p + 1}, bounded against k^{n}"
    z = zero_set(f)
    if isinstance(z, ExactCofinite):
        return "in", "zero orders at dyadic points are eventually infinite"
    star = _i_star(f)
    if star and star[0] == "out":
        return "out", "not in i_star, which contains i_n"
    if isinstance(f, Product):
        for part in (f.left, f.right):
            r = _i_n(part, n)
            if r and r[0] == "in":
                return "in", "a factor lies in the ideal"
    if isinstance(f, Sum):
        a, b = _i_n(f.left, n), _i_n(f.right, n)
        if a and b and a[0] == b[0] == "in":
            return "in", "both summands lie in the ideal"
    if isinstance(f, (Conj, HalfRoot)) or (isinstance(f, ScalarMul) and f.scalar):
        return _i_n(f.arg, n)
    return None


def _M_n(f: Expr, n: int) -> tuple[str, str] | None:
    p = _pattern_of(f)
    if p is not None:
        if p + 1 <= n:
            return "in", f"zero orders grow like k^{p + 1}, bounded against k^{n}"
        return "out", f"zero orders grow like k^{p + 1}, unbounded against k^{n}"
    z = zero_set(f)
    if isinstance(z, ExactFinite):
        return "in", "finitely many zeros bound every zero order"
    if isinstance(z, ExactCofinite):
        return "out", "zero orders at dyadic points are eventually infinite"
    if infer_lower(f) is not None:
        return "in", "f has no zeros, so every zero order is 0"
    if isinstance(f, Product):
        for part in (f.left, f.right):
            r = _M_n(part, n)
            if r and r[0] == "out":
                return "out", "a factor already has unbounded zero orders, and products only lengthen runs"
    if isinstance(f, (Conj, HalfRoot)) or (isinstance(f, ScalarMul) and f.scalar):
        return _M_n(f.arg, n)
    return None


def _order_trend(f: Expr, n: int, K: int) -> tuple[tuple, list[Fraction]]:
    orders = _orders(f, K)
    ratios = [Fraction(o.value, k**n) for k, o in zip(range(1, K + 1), orders)]
    trend = tuple(
        (("k", k), ("zero_order", o.to_json()), ("ratio", str(r)), ("ratio_float", float(r)))
        for k, o, r in zip(range(1, K + 1), orders, ratios)
    )
    return trend, ratios


def membership_i_n(f: Expr, n: int, K: int = DEFAULT_K) -> KrullSetVerdict:
    if n < 1 or K < 1:
        raise ValueError("n and K must be positive")
    r = _i_n(f, n)
    if r is not None:
        return KrullSetVerdict("i_n", n, f"certified_{r[0]}", r[1])
    trend, ratios = _order_trend(f, n, K)
    tail = ratios[len(ratios) // 2 :]
    growing = all(b > a for a, b in zip(tail, tail[1:])) and tail[0] > 0
    verdict = "empirical_in" if growing else "empirical_out"
    return KrullSetVerdict("i_n", n, verdict, "zero order over k^n on the horizon", trend)


def membership_M_n(f: Expr, n: int, K: int = DEFAULT_K) -> KrullSetVerdict:
    if n < 1 or K < 1:
        raise ValueError("n and K must be positive")
    r = _M_n(f, n)
    if r is not None:
        return KrullSetVerdict("M_n", n, f"certified_{r[0]}", r[1])
    trend, ratios = _order_trend(f, n, K)
    tail = ratios[len(ratios) // 2 :]
    growing = all(b > a for a, b in zip(tail, tail[1:])) and tail[0] > 0
    verdict = "empirical_out" if growing else "empirical_in"
    return KrullSetVerdict("M_n", n, verdict, "zero order over k^n on the horizon", trend)


# ----------------------------------------------------------------- report


def default_pool(N: int, dim: int = 1) -> list[tuple[str, Expr]]:
    e1 = unit_vector(dim, 1)
    origin = tuple(0 for _ in range(dim))
    lin = CoordPoly({e1: 1, origin: 1}, dim)
    sq = CoordPoly({tuple(2 * c for c in e1): 1, origin: 1}, dim)
    pool = [
        ("const_0", Const(0, dim)),
        ("const_1", Const(1, dim)),
        ("dirac_e1", Dirac(e1)),
        ("finite_support", FiniteSupport({origin: 2, e1: -1, tuple(4 * c for c in e1): Fraction(1, 3)}, dim)),
        ("one_plus_n1_sq", sq),
    ]
    for p in range(1, N + 2):
        pool.append((f"mask_{p}", PatternMask(p, dim)))
        pool.append((f"mask_{p}_times_one_plus_n1", Product(PatternMask(p, dim), lin)))
        pool.append((f"mask_{p}_times_one_plus_n1_sq", Product(PatternMask(p, dim), sq)))
    return pool


def _ratio_rows(n: int, K: int, dim: int) -> list[dict]:
    rows = []
    cap = 2**K
    f = PatternMask(n, dim)
    for k in range(1, K + 1):
        o = zero_order(f, _dyadic(k, dim), cap)
        base = k ** (n + 1)
        r_n, r_n1 = Fraction(o.value, k**n), Fraction(o.value, base)
        rows.append(
            {
                "n": n,
                "k": k,
                "zero_order": o.to_json(),
                "k_pow_n_plus_1": base,
                "excess_over_k_pow_n_plus_1": o.value - base,
                "gap": 2**k > base + 1,
                "ratio_k_pow_n": str(r_n),
                "ratio_k_pow_n_float": float(r_n),
                "ratio_k_pow_n_plus_1": str(r_n1),
                "ratio_k_pow_n_plus_1_float": float(r_n1),
            }
        )
    return rows


@dataclass(frozen=True)
class ChainReport:
    N: int
    K: int
    dim: int
    memberships: tuple
    strictness: tuple
    disjointness: dict
    ratio_table: tuple

    @property
    def ok(self) -> bool:
        mem = all(m["as_expected"] for m in self.memberships)
        return mem and all(s["strict"] for s in self.strictness) and self.disjointness["violations"] == 0

    def to_json(self) -> dict:
        return {
            "verdict": "chain_ok" if self.ok else "chain_failed",
            "scope": "global",
            "N": self.N,
            "K": self.K,
            "dim": self.dim,
            "memberships": list(self.memberships),
            "strictness": list(self.strictness),
            "disjointness": self.disjointness,
            "ratio_table": list(self.ratio_table),
        }


def chain_report(N: int, K: int = DEFAULT_K, dim: int = 1, budget: int = DEFAULT_BUDGET, pool=None) -> ChainReport:
    """Checkable skeleton of the strictly decreasing chain built from f_1, f_2, ..."""
    if N < 1:
        raise ValueError("N must be at least 1")
    if K < 8:
        raise ValueError("probe horizon K must be at least 8")
    if 2**K > budget:
        raise BudgetExceeded(f"2^{K} axis probes exceed the budget of {budget}")
    memberships = []
    for n in range(1, N + 2):
        f = PatternMask(n, dim)
        for verdict, expect in (
            (membership_i_n(f, n, K), True),
            (membership_i_n(f, n + 1, K), False),
            (membership_M_n(f, n + 1, K), True),
            (membership_M_n(f, n, K), False),
        ):
            row = verdict.to_json()
            row.pop("trend")
            row.update(element=f"mask_{n}", expected_in=expect, as_expected=verdict.certified and verdict.inside == expect)
            memberships.append(row)
    strictness = []
    for n in range(1, N + 1):
        f = PatternMask(n, dim)
        strictness.append(
            {
                "n": n,
                "i_n_plus_1_below_i_n": f"mask_{n}",
                "M_n_below_M_n_plus_1": f"mask_{n}",
                "strict": membership_i_n(f, n, K).inside
                and not membership_i_n(f, n + 1, K).inside
                and membership_M_n(f, n + 1, K).inside
                and not membership_M_n(f, n, K).inside,
            }
        )
    pool = default_pool(N, dim) if pool is None else pool
    checked, violations, rows = 0, [], []
    for name, g in pool:
        for n in range(1, N + 2):
            a, b = membership_i_n(g, n, K), membership_M_n(g, n, K)
            checked += 1
            both = a.inside and b.inside
            if both and a.certified and b.certified:
                violations.append({"element": name, "n": n})
            rows.append({"element": name, "n": n, "i_n": a.verdict, "M_n": b.verdict, "both_in": both})
    disjoint = {"pool_size": len(pool), "checks": checked, "violations": len(violations), "violating": violations, "rows": rows}
    table = tuple(row for n in range(1, N + 2) for row in _ratio_rows(n, K, dim))
    return ChainReport(N, K, dim, tuple(memberships), tuple(strictness), disjoint, table)
