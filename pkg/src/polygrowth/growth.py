"""Growth certificates |f(n)| <= M (1 + ||n||_1)^m: inference, audits and fits.

All checks run in power form (|f|^p against the p-th power of the bound,
p = 2 unless half_root nodes are present) so no irrational magnitude is
ever materialized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

import numpy as np

from ._vec import QArray
from .errors import QuotientNotInferable
from .expr import (
    Conj,
    Const,
    CoordPoly,
    Dirac,
    DiracComplement,
    Expr,
    FiniteSupport,
    HalfRoot,
    InvNormPower,
    MagnitudeMaxSq,
    PatternMask,
    Product,
    Quotient,
    ScalarMul,
    Shift,
    Sum,
    Evaluator,
    abs_power,
)
from .lattice import Point, Window, norm1, root_upper, sqrt_lower, sqrt_upper

DEFAULT_M_CAP = 32
DEFAULT_RADIUS = 100


@dataclass(frozen=True)
class GrowthCertificate:
    """Claim |f(n)| <= M (1 + ||n||_1)^m, for all n (global) or on a window."""

    M: Fraction
    m: int
    scope: str = "global"
    window: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "M", Fraction(self.M))
        if self.M <= 0 or self.m < 0:
            raise ValueError("a growth certificate needs M > 0 and m >= 0")

    def to_json(self) -> dict:
        return {"M": str(self.M), "m": self.m, "scope": self.scope, "window": self.window}


@dataclass(frozen=True)
class LowerCertificate:
    """Claim |f(n)| >= delta (1 + ||n||_1)^(-m)."""

    delta: Fraction
    m: int
    scope: str = "global"
    window: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "delta", Fraction(self.delta))
        if self.delta <= 0 or self.m < 0:
            raise ValueError("a lower certificate needs delta > 0 and m >= 0")

    def to_json(self) -> dict:
        return {"delta": str(self.delta), "m": self.m, "scope": self.scope, "window": self.window}


@dataclass(frozen=True)
class AuditReport:
    verdict: str
    window: int
    samples: int
    scope: str
    point: Point | None = None
    lhs: Fraction | None = None
    rhs: Fraction | None = None
    power: int = 2

    @property
    def validated(self) -> bool:
        return self.verdict == "validated"

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "samples": self.samples,
            "window": self.window,
            "scope": self.scope,
            "point": list(self.point) if self.point is not None else None,
        }
        if self.point is not None:
            out.update(lhs=str(self.lhs), rhs=str(self.rhs), power=self.power)
        return out


@dataclass(frozen=True)
class NoFit:
    """No exponent up to ``m_cap`` passed the window fit."""

    window: int
    m_cap: int
    power: int = 2
    evidence: tuple = field(default=())

    def to_json(self) -> dict:
        return {
            "verdict": "no_fit",
            "window": self.window,
            "m_cap": self.m_cap,
            "power": self.power,
            "scope": "window",
            "trend": [{"point": list(p), "value": str(v)} for p, v in self.evidence],
        }


# ------------------------------------------------------------- inference


def _pos(x: Fraction) -> Fraction:
    return x if x > 0 else Fraction(1)


def _upper(f: Expr) -> tuple[Fraction, int]:
    if isinstance(f, Const):
        return sqrt_upper(max(f.value.sqmag(), Fraction(1))), 0
    if isinstance(f, CoordPoly):
        return _pos(sum((sqrt_upper(c.sqmag()) for _, c in f.terms), Fraction(0))), f.degree
    if isinstance(f, (Dirac, DiracComplement, PatternMask, InvNormPower)):
        return Fraction(1), 0
    if isinstance(f, FiniteSupport):
        return _pos(max((sqrt_upper(c.sqmag()) for _, c in f.values), default=Fraction(0))), 0
    if isinstance(f, Sum):
        (M1, m1), (M2, m2) = _upper(f.left), _upper(f.right)
        return M1 + M2, max(m1, m2)
    if isinstance(f, Product):
        (M1, m1), (M2, m2) = _upper(f.left), _upper(f.right)
        return M1 * M2, m1 + m2
    if isinstance(f, Conj):
        return _upper(f.arg)
    if isinstance(f, ScalarMul):
        M, m = _upper(f.arg)
        return _pos(sqrt_upper(f.scalar.sqmag()) * M), m
    if isinstance(f, Shift):
        # 1 + ||n - v|| <= (1 + ||v||)(1 + ||n||)
        M, m = _upper(f.arg)
        return M * (1 + norm1(f.by)) ** m, m
    if isinstance(f, HalfRoot):
        M, m = _upper(f.arg)
        return max(M, Fraction(1)), ceil(m / 2)
    if isinstance(f, MagnitudeMaxSq):
        # the node stores squared magnitudes, so the bound squares too
        bounds = [_upper(a) for a in f.args]
        return max(M for M, _ in bounds) ** 2, 2 * max(m for _, m in bounds)
    if isinstance(f, Quotient):
        raise QuotientNotInferable("quotient bounds come from audits or divisibility witnesses")
    raise TypeError(f"unexpected node {f!r}")


def infer_certificate(f: Expr) -> GrowthCertificate:
    """Structural certificate valid on all of Z^d."""
    M, m = _upper(f)
    return GrowthCertificate(M, m, "global")


def _lower(f: Expr) -> tuple[Fraction, int] | None:
    if isinstance(f, Const):
        return (sqrt_lower(f.value.sqmag()), 0) if f.value else None
    if isinstance(f, CoordPoly):
        if f.terms and f.degree == 0:
            return sqrt_lower(f.terms[0][1].sqmag()), 0
        return None
    if isinstance(f, InvNormPower):
        return Fraction(1), f.m
    if isinstance(f, Product):
        a, b = _lower(f.left), _lower(f.right)
        if a is None or b is None:
            return None
        return a[0] * b[0], a[1] + b[1]
    if isinstance(f, Conj):
        return _lower(f.arg)
    if isinstance(f, ScalarMul):
        a = _lower(f.arg)
        if a is None or not f.scalar:
            return None
        return sqrt_lower(f.scalar.sqmag()) * a[0], a[1]
    if isinstance(f, Shift):
        a = _lower(f.arg)
        if a is None:
            return None
        return a[0] / (1 + norm1(f.by)) ** a[1], a[1]
    if isinstance(f, HalfRoot):
        a = _lower(f.arg)
        if a is None:
            return None
        return min(a[0], Fraction(1)), ceil(a[1] / 2)
    if isinstance(f, MagnitudeMaxSq):
        for arg in f.args:
            a = _lower(arg)
            if a is not None:
                return a[0] ** 2, 2 * a[1]
        return None
    if isinstance(f, Quotient):
        a, b = _lower(f.num), _lower(f.den)
        if a is None or b is None or f.den.has_quotient:
            return None
        M, m = _upper(f.den)
        return a[0] / M, a[1] + m
    return None


def infer_lower(f: Expr) -> LowerCertificate | None:
    """Structural lower bound on |f|, or None when no rule applies."""
    a = _lower(f)
    return None if a is None else LowerCertificate(a[0], a[1], "global")


# ----------------------------------------------------------------- audits


def _norm_plus_one(pts: np.ndarray) -> np.ndarray:
    return (np.abs(pts).sum(axis=1) + 1).astype(object)


def audit_upper(f: Expr, cert: GrowthCertificate, w: Window, ev: Evaluator | None = None) -> AuditReport:
    """Check |f(n)| <= M (1+||n||)^m at every window point, in power form."""
    pts = w.array()
    Q, p = abs_power(f, ev or pts)
    base = _norm_plus_one(pts)
    rhs = QArray(cert.M.numerator**p * base ** (cert.m * p), cert.M.denominator**p, reduce=False)
    ok = Q.le(rhs)
    if ok.all():
        return AuditReport("validated", w.radius, len(pts), cert.scope, power=p)
    i = int(np.argmin(ok))
    return AuditReport("falsified", w.radius, len(pts), cert.scope, tuple(int(c) for c in pts[i]), Q.item(i), rhs.item(i), p)


def audit_lower(f: Expr, cert: LowerCertificate, w: Window, ev: Evaluator | None = None) -> AuditReport:
    """Check |f(n)| >= delta (1+||n||)^(-m) at every window point, in power form."""
    pts = w.array()
    Q, p = abs_power(f, ev or pts)
    base = _norm_plus_one(pts)
    scaled = Q * QArray(base ** (cert.m * p), 1, reduce=False)
    bound = QArray.const(cert.delta**p, len(pts))
    ok = bound.le(scaled)
    if ok.all():
        return AuditReport("validated", w.radius, len(pts), cert.scope, power=p)
    i = int(np.argmin(ok))
    rhs = Fraction(cert.delta**p, int(base[i]) ** (cert.m * p))
    return AuditReport("falsified", w.radius, len(pts), cert.scope, tuple(int(c) for c in pts[i]), Q.item(i), rhs, p)


# -------------------------------------------------------------------- fits


def shell_maxima(Q: QArray, norms: np.ndarray, radius: int) -> list[tuple[Fraction, int]]:
    """Per 1-norm shell s = 0..radius: (max value, index of first maximizer).

    Assumes the points are in canonical order, so shells are contiguous.
    """
    bounds = np.searchsorted(norms, np.arange(radius + 2), side="left")
    out = []
    num, den = Q.num, Q.dens()
    for s in range(radius + 1):
        lo, hi = int(bounds[s]), int(bounds[s + 1])
        best, bn, bd = lo, num[lo], den[lo]
        for i in range(lo + 1, hi):
            if num[i] * bd > bn * den[i]:
                best, bn, bd = i, num[i], den[i]
        out.append((Fraction(int(bn), int(bd)), best))
    return out


def fit_power_values(Q: QArray, p: int, w: Window, m_cap: int = DEFAULT_M_CAP) -> GrowthCertificate | NoFit:
    """Fit (M, m) to values Q = |f|^p given on the canonical window points.

    For each m = 0, 1, ... the ratio |f|^2 / (1+||n||)^(2m) is compared
    between the whole window and its inner half: m is accepted once doubling
    the radius grows the maximal squared ratio by less than a factor 2 (the
    inner half is widened to the first shell where f is nonzero).  M is then
    the exact maximal ratio over the window.
    """
    pts = w.array()
    norms = np.abs(pts).sum(axis=1)
    R = w.radius
    shells = shell_maxima(Q, norms, R)
    nonzero = [s for s, (v, _) in enumerate(shells) if v > 0]
    if not nonzero:
        return GrowthCertificate(1, 0, "window", R)
    h = max(R // 2, nonzero[0])
    for m in range(m_cap + 1):
        ratios = [v / Fraction((1 + s) ** (m * p)) for s, (v, _) in enumerate(shells)]
        A = max(ratios[: h + 1])
        B = max(ratios)
        if B == A or B * B < 2**p * A * A:
            return GrowthCertificate(root_upper(B, p), m, "window", R)
    probes = sorted({max(R >> k, 0) for k in range(4)})
    evidence = tuple((tuple(int(c) for c in pts[shells[s][1]]), shells[s][0]) for s in probes)
    return NoFit(R, m_cap, p, evidence)


def fit_certificate(f: Expr, w: Window, m_cap: int = DEFAULT_M_CAP, ev: Evaluator | None = None) -> GrowthCertificate | NoFit:
    """Window-scoped certificate for f; never a global claim."""
    Q, p = abs_power(f, ev or w.array())
    return fit_power_values(Q, p, w, m_cap)
