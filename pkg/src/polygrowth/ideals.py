"""Fixed maximal ideals, the diagonal decay ideal, principal primes and separators."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatch, EqualPoints, VanishesAtK
from .expr import (
    Const,
    Dirac,
    DiracComplement,
    Expr,
    ExactCofinite,
    ExactFinite,
    FiniteSupport,
    Pattern,
    Product,
    Quotient,
    ScalarMul,
    Sum,
    Unknown,
    abs_power,
    evaluate,
    evaluate_points,
    is_zero_at,
    to_json,
    zero_mask,
    zero_set,
)
from .growth import DEFAULT_M_CAP, AuditReport, GrowthCertificate, NoFit, audit_upper, fit_certificate, infer_lower
from .lattice import Point, Window, as_point, canonical_key
from .ring import Inconclusive, Invertible, is_invertible

# rational bounds on e
E_LOWER = Fraction(2718281, 1000000)
E_UPPER = Fraction(2718282, 1000000)


def fixed_maximal_member(f: Expr, k) -> bool:
    """f in m_k, i.e. f(k) = 0 exactly."""
    return is_zero_at(f, as_point(k, f.dim))


@dataclass(frozen=True)
class MaximalityWitness:
    g: Expr
    unit_check: bool
    window: int
    point: Point

    def to_json(self) -> dict:
        return {
            "verdict": "witness",
            "scope": "window",
            "g": to_json(self.g),
            "g_vanishes_at_k": True,
            "unit_check": self.unit_check,
            "point": list(self.point),
            "window": self.window,
        }


def maximality_witness(k, f: Expr, w: Window) -> MaximalityWitness:
    """g = 1 - f/f(k) lies in m_k, and g + f/f(k) = 1 is checked on the window."""
    k = as_point(k, f.dim)
    v = evaluate(f, k)
    if not v:
        raise VanishesAtK(f"f vanishes at {list(k)}")
    one = Const(1, f.dim)
    scaled = ScalarMul(1 / v, f)
    g = Const(0, f.dim) if isinstance(f, Const) else Sum(one, ScalarMul(-1, scaled))
    pts = w.array()
    total = evaluate_points(g, pts) + evaluate_points(scaled, pts)
    ok = bool(total.equals(evaluate_points(one, pts)).all()) and fixed_maximal_member(g, k)
    return MaximalityWitness(g, ok, w.radius, k)


# --------------------------------------------------------------- diagonal


@dataclass(frozen=True)
class DiagonalVerdict:
    verdict: str  # certified_yes | certified_no | empirical_yes | empirical_no
    index: int | None = None
    reason: str = ""
    trend: tuple = field(default=())

    @property
    def decided(self) -> bool:
        return self.verdict.startswith("certified")

    @property
    def scope(self) -> str:
        return "global" if self.decided else "window"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "scope": self.scope,
            "index": self.index,
            "reason": self.reason,
            "trend": [dict(t) for t in self.trend],
        }


def _subsequence(spec, J: int) -> list[int]:
    if spec is None:
        ks = list(range(1, J + 1))
    elif callable(spec):
        ks = [int(spec(j)) for j in range(1, J + 1)]
    else:
        ks = [int(k) for k in spec][:J]
        if len(ks) < J:
            raise ValueError(f"subsequence lists {len(ks)} terms, horizon needs {J}")
    if ks[0] < 1 or any(b <= a for a, b in zip(ks, ks[1:])):
        raise ValueError("subsequence must be strictly increasing positive integers")
    return ks


_SEARCH_LIMIT = 100000


def nonfixed_ideal_member(f: Expr, subsequence: Callable[[int], int] | Sequence[int] | None = None, J: int = 20) -> DiagonalVerdict:
    """Is e^(k_j) f(k_j, ..., k_j) -> 0?  Exact answers where structure allows."""
    if J < 1:
        raise ValueError("horizon J must be at least 1")
    d = f.dim
    ks = _subsequence(subsequence, J)
    z = zero_set(f)
    if isinstance(z, ExactCofinite):
        return DiagonalVerdict("certified_yes", reason="f vanishes off a finite set, so eventually along the diagonal")
    lower = infer_lower(f)
    if lower is not None and (subsequence is None or callable(subsequence)):
        # e^(2k)|f|^2 >= e_lo^(2k) delta^2 / (1 + d k)^(2m); k_j >= j makes this exceed 1 eventually
        delta2 = lower.delta**2
        for j in range(1, _SEARCH_LIMIT + 1):
            k = j if subsequence is None else int(subsequence(j))
            if E_LOWER ** (2 * k) * delta2 > (1 + d * k) ** (2 * lower.m):
                return DiagonalVerdict("certified_no", index=j, reason="structural lower bound times e^k exceeds 1 and keeps growing")
    pts = np.array([[k] * d for k in ks], dtype=np.int64)
    Q, p = abs_power(f, pts)
    trend = []
    uppers = []
    for j, k in enumerate(ks, start=1):
        q = Q.item(j - 1)
        lo, hi = E_LOWER ** (p * k) * q, E_UPPER ** (p * k) * q
        uppers.append(hi)
        trend.append((("j", j), ("k", k), ("abs_pow", str(q)), ("power", p), ("lower", float(lo)), ("upper", float(hi))))
    tail = uppers[len(uppers) // 2 :]
    if uppers[-1] < 1 and all(b <= a for a, b in zip(tail, tail[1:])):
        return DiagonalVerdict("empirical_yes", reason="e^(p k_j)|f|^p decreasing below 1 on the horizon", trend=tuple(trend))
    return DiagonalVerdict("empirical_no", reason="no decay to 0 visible on the horizon", trend=tuple(trend))


# ------------------------------------------------------------ classifier


@dataclass(frozen=True)
class FixedMaximal:
    point: Point
    cert: GrowthCertificate  # bound on 1/|d| off the zero
    audit: AuditReport

    decided = True

    @property
    def scope(self) -> str:
        return self.cert.scope

    def to_json(self) -> dict:
        return {
            "verdict": "fixed_maximal",
            "scope": self.scope,
            "point": list(self.point),
            "inverse_bound": self.cert.to_json(),
            "audit": self.audit.to_json(),
        }


@dataclass(frozen=True)
class NotPrime:
    a: Expr
    b: Expr
    zeros: tuple[Point, Point]
    identity_window: int

    decided = True
    scope = "global"

    def to_json(self) -> dict:
        m, n = self.zeros
        return {
            "verdict": "not_prime",
            "scope": "global",
            "a": to_json(self.a),
            "b": to_json(self.b),
            "zeros": [list(m), list(n)],
            "obstructions": {
                "a_not_in_ideal": {"point": list(m), "a": "1", "d": "0"},
                "b_not_in_ideal": {"point": list(n), "b": "1", "d": "0"},
            },
            "identity_checked": {"window": self.identity_window},
        }


@dataclass(frozen=True)
class NotProper:
    witness: Invertible

    decided = True

    @property
    def scope(self) -> str:
        return self.witness.scope

    def to_json(self) -> dict:
        return {"verdict": "not_proper", "scope": self.scope, "invertibility": self.witness.to_json()}


def _two_zeros(d: Expr, z, w: Window) -> list[Point]:
    if isinstance(z, ExactFinite):
        return sorted(z.points, key=canonical_key)[:2]
    if isinstance(z, ExactCofinite):
        radius = max((sum(abs(c) for c in p) for p in z.points), default=0) + 2
        return [p for p in Window(radius, d.dim) if p not in z.points][:2]
    pts = w.array()
    idx = np.flatnonzero(zero_mask(d, pts))[:2]
    return [tuple(int(c) for c in pts[i]) for i in idx]


def _unit_factor_bound(d: Expr, n: Point) -> GrowthCertificate | None:
    """Global bound on 1/|d| off n when d = DiracComplement(n) times a unit with a lower bound."""
    if d == DiracComplement(n):
        return GrowthCertificate(1, 0)
    if isinstance(d, Product):
        for a, b in ((d.left, d.right), (d.right, d.left)):
            if a == DiracComplement(n):
                low = infer_lower(b)
                if low is not None:
                    return GrowthCertificate(1 / low.delta, low.m)
    return None


def classify_principal_prime(d: Expr, w: Window, m_cap: int = DEFAULT_M_CAP):
    """Classify <d> by the number of zeros of d: none, one, or at least two."""
    z = zero_set(d)
    if isinstance(z, Unknown):
        return Inconclusive("zero set of d is not known exactly")
    zeros = _two_zeros(d, z, w)
    if len(zeros) >= 2:
        if d.has_half_root:
            return Inconclusive("half_root terms block the exact identity a*b = d")
        m, n = zeros
        a = DiracComplement(n)
        b = Sum(d, FiniteSupport({n: 1}, d.dim))
        radius = max(w.radius, sum(map(abs, m)), sum(map(abs, n)))
        pts = Window(radius, d.dim).array()
        ok = bool(evaluate_points(Product(a, b), pts).equals(evaluate_points(d, pts)).all())
        ok = ok and evaluate(a, m) == 1 and evaluate(b, n) == 1 and is_zero_at(d, m) and is_zero_at(d, n)
        if not ok:
            raise AssertionError("zero-swap witnesses failed their identity")
        return NotPrime(a, b, (m, n), radius)
    if not zeros:
        if isinstance(z, Pattern):
            return Inconclusive("no pattern zero inside the window")
        inv = is_invertible(d, w, m_cap)
        if isinstance(inv, Invertible):
            return NotProper(inv)
        return Inconclusive("d has no zeros but no lower bound was found", inv.to_json())
    (n,) = zeros
    inverse = Quotient(Const(1, d.dim), d)
    cert = _unit_factor_bound(d, n)
    if cert is None:
        fit = fit_certificate(inverse, w, m_cap)
        if isinstance(fit, NoFit):
            return Inconclusive("no bound on 1/|d| fits off the zero", fit.to_json())
        cert = fit
    return FixedMaximal(n, cert, audit_upper(inverse, cert, w))


# -------------------------------------------------------------- separator


def separator(n1, n2) -> Dirac:
    """An element of m_{n1} outside m_{n2}."""
    p1, p2 = as_point(n1), as_point(n2)
    if len(p1) != len(p2):
        raise DimensionMismatch("points live in different dimensions")
    if p1 == p2:
        raise EqualPoints("separator needs two distinct points")
    return Dirac(p2)
