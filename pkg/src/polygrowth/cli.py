"""Command-line front end: every subcommand prints one canonical JSON report.

Exit codes: 0 decided, 1 usage or parse error, 2 inconclusive or window-only.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import growth, ideals, krull, ring
from .errors import PolygrowthError, QuotientNotInferable
from .expr import (
    Expr,
    PatternMask,
    dumps_canonical,
    eval_approx,
    evaluate,
    parse,
    pattern_zero,
    to_json,
    zero_set,
    zero_set_to_json,
)
from .lattice import Window, as_point

EXIT_OK, EXIT_USAGE, EXIT_UNDECIDED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass
class Config:
    dim: int | None
    radius: int
    K: int
    cap: int
    m_cap: int
    precision_bits: int
    format: str

    def to_json(self) -> dict:
        return dict(vars(self))


# ------------------------------------------------------------------ inputs


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _load(path: str, cfg: Config) -> Expr:
    f = parse(_read(path), cfg.dim)
    if cfg.dim is None:
        cfg.dim = f.dim
    return f


def _point(text: str, cfg: Config):
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        raise UsageError(f"point must be a JSON array of integers, got {text!r}") from None
    if not isinstance(data, list) or not data or not all(isinstance(c, int) and not isinstance(c, bool) for c in data):
        raise UsageError(f"point must be a JSON array of integers, got {text!r}")
    if cfg.dim is None:
        cfg.dim = len(data)
    return as_point(data, cfg.dim)


def _window(cfg: Config) -> Window:
    return Window(cfg.radius, cfg.dim)


def _verdict_exit(v) -> int:
    return EXIT_OK if v.decided and v.scope == "global" else EXIT_UNDECIDED


# -------------------------------------------------------------- commands


def cmd_eval(a, cfg):
    f = _load(a.expr, cfg)
    p = _point(a.point, cfg)
    if f.has_half_root or a.approx:
        val = eval_approx(f, p, cfg.precision_bits)
        digits = max(1, int(cfg.precision_bits * 0.30103))
        with mpmath.workprec(cfg.precision_bits + 32):
            re = mpmath.nstr(val.value.real, digits)
            im = mpmath.nstr(val.value.imag, digits)
        out = {"value": {"re": re, "im": im}, "exact": False, "rel_error_bound": f"2^-{cfg.precision_bits}", "scope": "global"}
    else:
        v = evaluate(f, p)
        out = {"value": v.to_json(), "exact": True, "scope": "global"}
    out["point"] = list(p)
    return out, EXIT_OK


def cmd_cert_infer(a, cfg):
    f = _load(a.expr, cfg)
    w = _window(cfg)
    try:
        cert = growth.infer_certificate(f)
    except QuotientNotInferable:
        fit = growth.fit_certificate(f, w, cfg.m_cap)
        if isinstance(fit, growth.NoFit):
            return {"verdict": "no_fit", "scope": "window", "fit": fit.to_json()}, EXIT_UNDECIDED
        audit = growth.audit_upper(f, fit, w)
        return {"verdict": "fitted", "scope": "window", "certificate": fit.to_json(), "audit": audit.to_json()}, EXIT_UNDECIDED
    audit = growth.audit_upper(f, cert, w)
    return {"verdict": "inferred", "scope": "global", "certificate": cert.to_json(), "audit": audit.to_json()}, EXIT_OK


def _fraction(text: str, name: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{name} must be a rational like 3/2, got {text!r}") from None


def cmd_cert_audit(a, cfg):
    f = _load(a.expr, cfg)
    w = _window(cfg)
    if a.delta is not None:
        cert = growth.LowerCertificate(_fraction(a.delta, "--delta"), a.m)
        report = growth.audit_lower(f, cert, w)
        kind = "lower"
    else:
        if a.M is None:
            raise UsageError("cert-audit needs --M (upper bound) or --delta (lower bound)")
        cert = growth.GrowthCertificate(_fraction(a.M, "--M"), a.m)
        report = growth.audit_upper(f, cert, w)
        kind = "upper"
    out = report.to_json()
    out.update(bound=kind, certificate=cert.to_json(), scope="window")
    return out, EXIT_OK


def cmd_divides(a, cfg):
    g = _load(a.g, cfg)
    f = _load(a.f, cfg)
    v = ring.divides(g, f, _window(cfg), cfg.m_cap)
    return v.to_json(), _verdict_exit(v)


def cmd_invertible(a, cfg):
    v = ring.is_invertible(_load(a.expr, cfg), _window(cfg), cfg.m_cap)
    return v.to_json(), _verdict_exit(v)


def _gens(a, cfg) -> list[Expr]:
    return [_load(p, cfg) for p in a.gens]


def cmd_gcd(a, cfg):
    d = ring.gcd(_gens(a, cfg))
    return {"verdict": "gcd", "scope": "global", "gcd": to_json(d), "zero_set": zero_set_to_json(zero_set(d))}, EXIT_OK


def cmd_member(a, cfg):
    f = _load(a.f, cfg)
    v = ring.ideal_member(f, _gens(a, cfg), _window(cfg), cfg.m_cap)
    return v.to_json(), _verdict_exit(v)


def cmd_principal(a, cfg):
    v = ring.principal_generator(_gens(a, cfg), _window(cfg), cfg.m_cap)
    return v.to_json(), _verdict_exit(v)


def cmd_maximal_member(a, cfg):
    f = _load(a.expr, cfg)
    k = _point(a.point, cfg)
    out = {"verdict": "member" if ideals.fixed_maximal_member(f, k) else "not_member", "scope": "global", "point": list(k)}
    if a.witness:
        out["witness"] = ideals.maximality_witness(k, f, _window(cfg)).to_json()
    return out, EXIT_OK


def cmd_nonfixed_member(a, cfg):
    f = _load(a.expr, cfg)
    sub = None
    if a.subsequence is not None:
        try:
            sub = json.loads(a.subsequence)
        except json.JSONDecodeError:
            raise UsageError("--subsequence must be a JSON array of integers") from None
        if not isinstance(sub, list):
            raise UsageError("--subsequence must be a JSON array of integers")
    v = ideals.nonfixed_ideal_member(f, sub, a.J)
    return v.to_json(), _verdict_exit(v)


def cmd_classify_prime(a, cfg):
    v = ideals.classify_principal_prime(_load(a.expr, cfg), _window(cfg), cfg.m_cap)
    return v.to_json(), _verdict_exit(v)


def cmd_separator(a, cfg):
    n1 = _point(a.n1, cfg)
    n2 = _point(a.n2, cfg)
    s = ideals.separator(n1, n2)
    return {
        "verdict": "separated",
        "scope": "global",
        "separator": to_json(s),
        "in_m_n1": ideals.fixed_maximal_member(s, n1),
        "in_m_n2": ideals.fixed_maximal_member(s, n2),
    }, EXIT_OK


def cmd_zero_order(a, cfg):
    f = _load(a.expr, cfg)
    p = _point(a.point, cfg)
    z = krull.zero_order(f, p, cfg.cap)
    return {"verdict": "zero_order", "scope": "global", "point": list(p), "zero_order": z.to_json()}, EXIT_OK


def cmd_mask(a, cfg):
    if cfg.dim is None and a.point is None:
        cfg.dim = 1
    out = {"verdict": "mask", "scope": "global", "n": a.n}
    if a.point is not None:
        p = _point(a.point, cfg)
        out.update(point=list(p), value="0" if pattern_zero(p, a.n) else "1")
    out["expr"] = {"dim": cfg.dim, "expr": to_json(PatternMask(a.n, cfg.dim))}
    return out, EXIT_OK


def cmd_krull_member(a, cfg):
    f = _load(a.expr, cfg)
    if a.set == "i_star":
        v = krull.membership_i_star(f, cfg.K)
    else:
        if a.n is None:
            raise UsageError(f"--set {a.set} needs --n")
        fn = krull.membership_i_n if a.set == "i_n" else krull.membership_M_n
        v = fn(f, a.n, cfg.K)
    return v.to_json(), _verdict_exit(v)


def cmd_chain_report(a, cfg):
    if cfg.dim is None:
        cfg.dim = 1
    r = krull.chain_report(a.N, cfg.K, cfg.dim, budget=a.budget)
    return r.to_json(), EXIT_OK if r.ok else EXIT_UNDECIDED


# ------------------------------------------------------------------ parser


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _nonnegative(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--dim", type=_positive, default=None, help="ambient dimension d")
    common.add_argument("--radius", type=_nonnegative, default=growth.DEFAULT_RADIUS, help="audit window radius R")
    common.add_argument("--K", type=_positive, default=krull.DEFAULT_K, help="probe horizon")
    common.add_argument("--cap", type=_positive, default=krull.DEFAULT_CAP, help="zero-order cap")
    common.add_argument("--m-cap", type=_nonnegative, default=growth.DEFAULT_M_CAP, help="largest fitted exponent")
    common.add_argument("--precision-bits", type=_positive, default=128)
    common.add_argument("--format", choices=("json", "text"), default="json")

    parser = _Parser(prog="polygrowth", description="Exact computations with polynomial-growth functions on Z^d.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("eval", cmd_eval, "evaluate an expression at a point")
    p.add_argument("--expr", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--approx", action="store_true", help="numeric value even when exact is available")

    p = add("cert-infer", cmd_cert_infer, "structural growth certificate")
    p.add_argument("--expr", required=True)

    p = add("cert-audit", cmd_cert_audit, "check a growth or lower certificate on the window")
    p.add_argument("--expr", required=True)
    p.add_argument("--M")
    p.add_argument("--delta")
    p.add_argument("--m", type=_nonnegative, required=True)

    p = add("divides", cmd_divides, "does g divide f")
    p.add_argument("--g", required=True)
    p.add_argument("--f", required=True)

    p = add("invertible", cmd_invertible, "is the expression a unit")
    p.add_argument("--expr", required=True)

    p = add("gcd", cmd_gcd, "gcd of generators")
    p.add_argument("--gens", nargs="+", required=True)

    p = add("member", cmd_member, "ideal membership with cofactors")
    p.add_argument("--f", required=True)
    p.add_argument("--gens", nargs="+", required=True)

    p = add("principal", cmd_principal, "single generator of a finitely generated ideal")
    p.add_argument("--gens", nargs="+", required=True)

    p = add("maximal-member", cmd_maximal_member, "membership in the fixed maximal ideal at a point")
    p.add_argument("--expr", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--witness", action="store_true", help="also build g = 1 - f/f(k)")

    p = add("nonfixed-member", cmd_nonfixed_member, "does e^k f(k,...,k) tend to 0 along a subsequence")
    p.add_argument("--expr", required=True)
    p.add_argument("--J", type=_positive, default=20)
    p.add_argument("--subsequence", help="JSON array of strictly increasing positive integers")

    p = add("classify-prime", cmd_classify_prime, "classify the principal ideal <d>")
    p.add_argument("--expr", required=True)

    p = add("separator", cmd_separator, "element of m_n1 outside m_n2")
    p.add_argument("--n1", required=True)
    p.add_argument("--n2", required=True)

    p = add("zero-order", cmd_zero_order, "zero order at a point")
    p.add_argument("--expr", required=True)
    p.add_argument("--point", required=True)

    p = add("mask", cmd_mask, "pattern mask f_n, optionally evaluated at a point")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--point")

    p = add("krull-member", cmd_krull_member, "membership in i_star, i_n or M_n")
    p.add_argument("--expr", required=True)
    p.add_argument("--set", choices=("i_star", "i_n", "M_n"), required=True)
    p.add_argument("--n", type=_positive)

    p = add("chain-report", cmd_chain_report, "checkable skeleton of the infinite chain")
    p.add_argument("--N", type=_positive, required=True)
    p.add_argument("--budget", type=_positive, default=krull.DEFAULT_BUDGET)
    return parser


def _text(obj, indent: str = "") -> list[str]:
    lines = []
    for key in sorted(obj):
        val = obj[key]
        if isinstance(val, dict):
            lines.append(f"{indent}{key}:")
            lines.extend(_text(val, indent + "  "))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{indent}{key}: [{len(val)} entries]")
        else:
            lines.append(f"{indent}{key}: {json.dumps(val, sort_keys=True)}")
    return lines


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"error: {e}", file=stderr)
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    cfg = Config(args.dim, args.radius, args.K, args.cap, args.m_cap, args.precision_bits, args.format)
    try:
        report, code = args.func(args, cfg)
    except (UsageError, PolygrowthError, ValueError) as e:
        print(f"error: {e}", file=stderr)
        return EXIT_USAGE
    report = {"command": args.command, "config": cfg.to_json(), **report}
    if cfg.format == "json":
        stdout.write(dumps_canonical(report) + "\n")
    else:
        stdout.write("\n".join(_text(report)) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
