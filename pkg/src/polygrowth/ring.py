"""Divisibility, units, gcds and ideal membership with exact witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._vec import QArray
from .errors import EmptyList, QuotientNotInferable
from .expr import (
    Conj,
    Const,
    Expr,
    ExactCofinite,
    ExactFinite,
    InvNormPower,
    MagnitudeMaxSq,
    Product,
    Quotient,
    ScalarMul,
    Sum,
    Evaluator,
    _same_dim,
    abs_power,
    evaluate_points,
    is_zero_at,
    sum_of,
    to_json,
    zero_mask,
    zero_set,
)
from .growth import (
    DEFAULT_M_CAP,
    AuditReport,
    GrowthCertificate,
    LowerCertificate,
    NoFit,
    audit_lower,
    audit_upper,
    fit_certificate,
    fit_power_values,
    infer_certificate,
    infer_lower,
)
from .lattice import GaussianRational, Point, Window, canonical_key, sqrt_upper

# ---------------------------------------------------------------- verdicts


@dataclass(frozen=True)
class Divides:
    cofactor: Expr
    cert: GrowthCertificate
    audit: AuditReport

    decided = True

    @property
    def scope(self) -> str:
        return self.cert.scope

    def to_json(self) -> dict:
        return {
            "verdict": "divides",
            "scope": self.scope,
            "cofactor": to_json(self.cofactor),
            "certificate": self.cert.to_json(),
            "audit": self.audit.to_json(),
        }


@dataclass(frozen=True)
class RefutedAtZero:
    """g(point) = 0 while f(point) != 0: an exact disproof."""

    point: Point

    decided = True
    scope = "global"

    def to_json(self) -> dict:
        return {"verdict": "refuted_at_zero", "scope": "global", "point": list(self.point)}


@dataclass(frozen=True)
class RefutedEmpirically:
    evidence: NoFit

    decided = False
    scope = "window"

    def to_json(self) -> dict:
        return {"verdict": "refuted_empirically", "scope": "window", "evidence": self.evidence.to_json()}


@dataclass(frozen=True)
class Invertible:
    lower: LowerCertificate
    inverse: Expr
    audit: AuditReport

    decided = True

    @property
    def scope(self) -> str:
        return self.lower.scope

    def to_json(self) -> dict:
        return {
            "verdict": "invertible",
            "scope": self.scope,
            "lower": self.lower.to_json(),
            "inverse": to_json(self.inverse),
            "audit": self.audit.to_json(),
        }


@dataclass(frozen=True)
class NotInvertible:
    point: Point

    decided = True
    scope = "global"

    def to_json(self) -> dict:
        return {"verdict": "not_invertible", "scope": "global", "point": list(self.point)}


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    evidence: dict = field(default_factory=dict)

    decided = False
    scope = "window"

    def to_json(self) -> dict:
        return {"verdict": "inconclusive", "scope": "window", "reason": self.reason, "evidence": self.evidence}


@dataclass(frozen=True)
class BezoutWitness:
    """Cofactors with sum_k f_k g_k = f, plus a bound |f| <= M (1+||n||)^m sqrt(sum_k |f_k|^2).

    The bound implies |g_k| <= M (1+||n||)^m for every k, and also the weaker
    form with sum_k |f_k| on the right.
    """

    cofactors: tuple
    cert: GrowthCertificate

    @property
    def scope(self) -> str:
        return self.cert.scope


@dataclass(frozen=True)
class Member:
    witness: BezoutWitness
    checked_points: int
    window: int

    decided = True

    @property
    def scope(self) -> str:
        return self.witness.scope

    def to_json(self) -> dict:
        return {
            "verdict": "member",
            "scope": self.scope,
            "cofactors": [to_json(g) for g in self.witness.cofactors],
            "certificate": self.witness.cert.to_json(),
            "identity_checked": {"window": self.window, "samples": self.checked_points},
        }


@dataclass(frozen=True)
class NotMember:
    point: Point

    decided = True
    scope = "global"

    def to_json(self) -> dict:
        return {"verdict": "not_member", "scope": "global", "point": list(self.point)}


@dataclass(frozen=True)
class PrincipalReport:
    generator: Expr
    forward: tuple
    reverse: object

    @property
    def decided(self) -> bool:
        return all(v.decided for v in self.forward) and self.reverse.decided

    @property
    def holds(self) -> bool:
        return all(isinstance(v, Divides) for v in self.forward) and isinstance(self.reverse, Member)

    @property
    def scope(self) -> str:
        scopes = [v.scope for v in self.forward] + [self.reverse.scope]
        return "global" if all(s == "global" for s in scopes) else "window"

    def to_json(self) -> dict:
        return {
            "verdict": "principal" if self.holds else "not_established",
            "scope": self.scope,
            "generator": to_json(self.generator),
            "forward": [v.to_json() for v in self.forward],
            "reverse": self.reverse.to_json(),
        }


# ----------------------------------------------------------------- helpers


def _first(mask: np.ndarray) -> int | None:
    idx = np.flatnonzero(mask)
    return int(idx[0]) if idx.size else None


def _row(pts: np.ndarray, i: int) -> Point:
    return tuple(int(c) for c in pts[i])


def _factors(f: Expr) -> tuple[list, list[Expr]]:
    """Flatten nested products and scalar multiples into (scalars, factors)."""
    if isinstance(f, Product):
        s1, a = _factors(f.left)
        s2, b = _factors(f.right)
        return s1 + s2, a + b
    if isinstance(f, ScalarMul):
        s, a = _factors(f.arg)
        return [f.scalar] + s, a
    return [], [f]


def _terms(f: Expr) -> list[Expr]:
    if isinstance(f, Sum):
        return _terms(f.left) + _terms(f.right)
    return [f]


def _upper_or_none(f: Expr) -> GrowthCertificate | None:
    try:
        return infer_certificate(f)
    except QuotientNotInferable:
        return None


def _without(items: list, drop: list) -> list | None:
    """Multiset difference items - drop, or None if drop is not contained in items."""
    rest = list(items)
    for x in drop:
        if x not in rest:
            return None
        rest.remove(x)
    return rest


def _cofactor_bound(f: Expr, g: Expr) -> GrowthCertificate | None:
    """A global bound on |f/g| off the zeros of g, when f is built from g."""
    f_scalars, f_factors = _factors(f)
    g_scalars, g_factors = _factors(g)
    rest = _without(f_factors, g_factors)
    if rest is not None and all(c for c in g_scalars):
        ratio = GaussianRational(1)
        for c in f_scalars:
            ratio = ratio * c
        for c in g_scalars:
            ratio = ratio / c
        h = rest[0] if rest else Const(1, f.dim)
        for r in rest[1:]:
            h = Product(h, r)
        c = _upper_or_none(h)
        if c is None:
            return None
        return GrowthCertificate(_pos(sqrt_upper(ratio.sqmag()) * c.M), c.m)
    if isinstance(g, Const) and g.value:
        c = _upper_or_none(f)
        if c is None:
            return None
        return GrowthCertificate(c.M * sqrt_upper(1 / g.value.sqmag()), c.m)
    if isinstance(g, InvNormPower):
        c = _upper_or_none(f)
        return None if c is None else GrowthCertificate(c.M, c.m + g.m)
    return None


def _pos(x: Fraction) -> Fraction:
    return x if x > 0 else Fraction(1)


def _window_refutation(g: Expr, f: Expr, ev: Evaluator) -> Point | None:
    """First point where g vanishes but f does not: exact zeros first, then the window."""
    zg = zero_set(g)
    if isinstance(zg, ExactFinite):
        for p in sorted(zg.points, key=canonical_key):
            if not is_zero_at(f, p):
                return p
        return None
    i = _first(zero_mask(g, ev) & ~zero_mask(f, ev))
    return None if i is None else _row(ev.pts, i)


def _identity_failure(lhs: Expr, rhs: Expr, ev: Evaluator) -> Point | None:
    if lhs.has_half_root or rhs.has_half_root:
        (qa, pa), (qb, pb) = abs_power(lhs, ev), abs_power(rhs, ev)
        ok = qa.le(qb) & qb.le(qa) if pa == pb else np.zeros(ev.size, dtype=bool)
    else:
        ok = evaluate_points(lhs, ev).equals(evaluate_points(rhs, ev))
    i = _first(~ok)
    return None if i is None else _row(ev.pts, i)


# -------------------------------------------------------------- operations


def cofactor(f: Expr, g: Expr) -> Quotient:
    """f/g with zero fill where g vanishes."""
    return Quotient(f, g)


def divides(g: Expr, f: Expr, w: Window, m_cap: int = DEFAULT_M_CAP):
    """Decide whether g divides f: a refutation point, a witnessed cofactor, or trend evidence."""
    _same_dim(g, f)
    ev = Evaluator(w.array())
    bad = _window_refutation(g, f, ev)
    if bad is not None:
        return RefutedAtZero(bad)
    h = cofactor(f, g)
    miss = _identity_failure(Product(h, g), f, ev)
    if miss is not None:  # only possible through a zero of g missed above
        return RefutedAtZero(miss)
    cert = _cofactor_bound(f, g)
    if cert is None:
        fit = fit_certificate(h, w, m_cap, ev)
        if isinstance(fit, NoFit):
            return RefutedEmpirically(fit)
        cert = fit
    return Divides(h, cert, audit_upper(h, cert, w, ev))


def _first_zero(f: Expr, ev: Evaluator) -> Point | None:
    z = zero_set(f)
    if isinstance(z, ExactFinite):
        return min(z.points, key=canonical_key) if z.points else None
    if isinstance(z, ExactCofinite):
        radius = max((sum(abs(c) for c in p) for p in z.points), default=0) + 1
        for p in Window(radius, f.dim):
            if p not in z.points:
                return p
    i = _first(zero_mask(f, ev))
    return None if i is None else _row(ev.pts, i)


def is_invertible(f: Expr, w: Window, m_cap: int = DEFAULT_M_CAP):
    """A unit needs |f| >= delta (1+||n||)^-m; any zero refutes that exactly."""
    ev = Evaluator(w.array())
    z = _first_zero(f, ev)
    if z is not None:
        return NotInvertible(z)
    inverse = Quotient(Const(1, f.dim), f)
    lower = infer_lower(f)
    if lower is None:
        fit = fit_certificate(inverse, w, m_cap, ev)
        if isinstance(fit, NoFit):
            return Inconclusive("no lower bound fits on the window", fit.to_json())
        lower = LowerCertificate(1 / fit.M, fit.m, "window", w.radius)
    return Invertible(lower, inverse, audit_lower(f, lower, w, ev))


def gcd(fs) -> MagnitudeMaxSq:
    """n -> max_k |f_k(n)|^2, a gcd up to the squared-magnitude representative."""
    fs = tuple(fs)
    if not fs:
        raise EmptyList("gcd of an empty list")
    _same_dim(*fs)
    return MagnitudeMaxSq(fs)


def _gram(gens) -> Expr:
    q = None
    for g in gens:
        t = Product(Conj(g), g)
        q = t if q is None else Sum(q, t)
    return q


def _membership_bound(f: Expr, gens: tuple) -> GrowthCertificate | None:
    """Global (M, m) with |f| <= M (1+||n||)^m max_k |f_k| from the shape of f."""
    if isinstance(f, MagnitudeMaxSq) and set(f.args) <= set(gens):
        certs = [_upper_or_none(a) for a in f.args]
        if any(c is None for c in certs):
            return None
        return GrowthCertificate(max(c.M for c in certs), max(c.m for c in certs))
    total_M, top_m = Fraction(0), 0
    for t in _terms(f):
        bound = None
        for g in gens:
            bound = _cofactor_bound(t, g) if t != g else GrowthCertificate(1, 0)
            if bound is not None:
                break
        if bound is None:
            return None
        total_M += bound.M
        top_m = max(top_m, bound.m)
    return GrowthCertificate(total_M, top_m)


def ideal_member(f: Expr, gens, w: Window, m_cap: int = DEFAULT_M_CAP):
    """Decide f in <gens> with cofactors g_k = conj(f_k) f / sum_j |f_j|^2."""
    gens = tuple(gens)
    if not gens:
        raise EmptyList("an ideal needs at least one generator")
    _same_dim(f, *gens)
    common = gcd(gens)
    pts = w.array()
    ev = Evaluator(pts)
    bad = _window_refutation(common, f, ev)
    if bad is not None:
        return NotMember(bad)
    if f.has_half_root or common.has_half_root:
        return Inconclusive("half_root terms have no exact Bezout identity")
    q = _gram(gens)
    cofs = tuple(Quotient(Product(Conj(g), f), q) for g in gens)
    lhs = evaluate_points(sum_of(Product(g, c) for g, c in zip(gens, cofs)), ev)
    ok = lhs.equals(evaluate_points(f, ev))
    i = _first(~ok)
    if i is not None:
        return NotMember(_row(pts, i))
    cert = _membership_bound(f, gens)
    if cert is None:
        # |f|^2 / sum_j |f_j|^2, zero-filled where every generator vanishes
        qv = evaluate_points(q, ev)
        ratio = evaluate_points(f, ev).sqmag() * QArray(qv.re, qv.den).reciprocal()
        fit = fit_power_values(ratio, 2, w, m_cap)
        if isinstance(fit, NoFit):
            return Inconclusive("no membership bound fits on the window", fit.to_json())
        cert = fit
    return Member(BezoutWitness(cofs, cert), len(pts), w.radius)


def principal_generator(gens, w: Window, m_cap: int = DEFAULT_M_CAP) -> PrincipalReport:
    """d = gcd(gens) with d | f_k for every k and d in <gens>."""
    gens = tuple(gens)
    d = gcd(gens)
    forward = tuple(divides(d, g, w, m_cap) for g in gens)
    return PrincipalReport(d, forward, ideal_member(d, gens, w, m_cap))
