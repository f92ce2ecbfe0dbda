"""End-to-end acceptance checks at full size.

Every check compares library output against an independent computation:
identities are re-evaluated term by term on the whole window, zero orders
come from a point-by-point scan, and the CLI suite is replayed in fresh
interpreters.
"""

import os
import random
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from golden_cases import CASES
from pool import rand_expr, rand_finite_support, rand_gauss, rand_nonzero_expr, rand_point
from polygrowth.expr import (
    Const,
    Dirac,
    DiracComplement,
    ExactCofinite,
    ExactFinite,
    FiniteSupport,
    InvNormPower,
    Pattern,
    PatternMask,
    Product,
    ScalarMul,
    evaluate,
    evaluate_points,
    sum_of,
    zero_set,
)
from polygrowth.ideals import (
    FixedMaximal,
    NotPrime,
    NotProper,
    classify_principal_prime,
    fixed_maximal_member,
    maximality_witness,
    separator,
)
from polygrowth.krull import chain_report, check_P1, check_P2, membership_i_n, membership_M_n, zero_order
from polygrowth.lattice import Window
from polygrowth.ring import Divides, Invertible, Member, NotInvertible, RefutedAtZero, divides, gcd, ideal_member, is_invertible

from test_krull import brute_zero_order

ROOT = Path(__file__).resolve().parent.parent
R = 50

pytestmark = pytest.mark.slow


def values(f, dim):
    return evaluate_points(f, Window(R, dim).array())


def same(a, b) -> bool:
    return bool(a.equals(b).all())


def test_bezout_exactness(criterion):
    criterion(1, "Bezout cofactors reproduce f exactly on R=50 (100 instances, d<=3, K<=4)")
    rng = random.Random(101)
    for i in range(100):
        dim = 1 + i % 3
        gens = [rand_nonzero_expr(rng, dim) for _ in range(rng.randint(1, 4))]
        f = sum_of(Product(rand_expr(rng, dim), g) for g in gens)
        v = ideal_member(f, gens, Window(R, dim))
        assert isinstance(v, Member), (i, v)
        total = values(gens[0], dim) * values(v.witness.cofactors[0], dim)
        for g, c in zip(gens[1:], v.witness.cofactors[1:]):
            total = total + values(g, dim) * values(c, dim)
        assert same(total, values(f, dim)), i


def test_divisibility(criterion):
    criterion(2, "100 Divides with cofactor*g = f on R=50, 100 RefutedAtZero")
    rng = random.Random(202)
    for i in range(100):
        dim = 1 + i % 3
        g = rand_nonzero_expr(rng, dim)
        f = Product(g, rand_expr(rng, dim))
        v = divides(g, f, Window(R, dim))
        assert isinstance(v, Divides), (i, v)
        assert same(values(v.cofactor, dim) * values(g, dim), values(f, dim)), i
    done = 0
    while done < 100:
        dim = 1 + done % 3
        p = rand_point(rng, dim)
        f = rand_expr(rng, dim)
        if not evaluate(f, p):
            continue
        g = Product(DiracComplement(p), rand_nonzero_expr(rng, dim))
        v = divides(g, f, Window(R, dim))
        assert isinstance(v, RefutedAtZero), (done, v)
        assert evaluate(g, v.point) == 0 and evaluate(f, v.point) != 0
        done += 1


def test_gcd_contract(criterion):
    criterion(3, "gcd divides each generator and lies in the ideal on R=50 (50 lists)")
    rng = random.Random(303)
    for i in range(50):
        dim = 1 + i % 3
        gens = [rand_nonzero_expr(rng, dim) for _ in range(rng.randint(1, 4))]
        d = gcd(gens)
        w = Window(R, dim)
        for g in gens:
            v = divides(d, g, w)
            assert isinstance(v, Divides), (i, v)
            assert same(values(v.cofactor, dim) * values(d, dim), values(g, dim))
        v = ideal_member(d, gens, w)
        assert isinstance(v, Member), (i, v)
        total = values(gens[0], dim) * values(v.witness.cofactors[0], dim)
        for g, c in zip(gens[1:], v.witness.cofactors[1:]):
            total = total + values(g, dim) * values(c, dim)
        assert same(total, values(d, dim))


def test_units_and_zero_sets(criterion):
    criterion(4, "InvNormPower(m<=8) invertible with delta=1 globally; known zeros give NotInvertible")
    for dim in (1, 2, 3):
        for m in range(9):
            v = is_invertible(InvNormPower(m, dim), Window(R, dim))
            assert isinstance(v, Invertible)
            assert (v.lower.delta, v.lower.m, v.scope) == (1, m, "global")
    rng = random.Random(404)
    seen = 0
    for i in range(300):
        dim = 1 + i % 3
        f = rand_expr(rng, dim)
        z = zero_set(f)
        nonempty = isinstance(z, (ExactCofinite, Pattern)) or (isinstance(z, ExactFinite) and z.points)
        if not nonempty:
            continue
        v = is_invertible(f, Window(10, dim))
        assert isinstance(v, NotInvertible), (i, v)
        assert evaluate(f, v.point) == 0
        seen += 1
    assert seen >= 100


def test_zero_order_oracle(criterion):
    criterion(5, "zero_order equals a brute-force scan (500 FiniteSupport, masks n<=3 at 2^k e1, k<=8)")
    rng = random.Random(505)
    for i in range(500):
        dim = 1 + i % 3
        f = rand_finite_support(rng, dim, size=6, spread=3)
        if rng.random() < 0.5:
            f = ScalarMul(rand_gauss(rng, nonzero=True), Product(f, DiracComplement(rand_point(rng, dim, 3))))
        n = rand_point(rng, dim, 3)
        assert zero_order(f, n, 64) == brute_zero_order(f, n, 64), i
    cap = 4096
    for n in (1, 2, 3):
        for dim in (1, 2, 3):
            for k in range(9):
                p = tuple(2**k if i == 0 else 0 for i in range(dim))
                got = zero_order(PatternMask(n, dim), p, cap)
                assert got == brute_zero_order(PatternMask(n, dim), p, cap), (n, dim, k)
                if 2**k > k ** (n + 1) + 1:
                    assert got.value in (k ** (n + 1), k ** (n + 1) + 1)


def test_p1_p2(criterion):
    criterion(6, "P1 and P2 hold on 500 random pairs each")
    rng = random.Random(606)
    for i in range(500):
        dim = 1 + i % 3
        f, g = rand_expr(rng, dim), rand_expr(rng, dim)
        n = rand_point(rng, dim, 3)
        assert check_P1(f, g, n, 64), i
        f, g = rand_expr(rng, dim), rand_expr(rng, dim)
        n = rand_point(rng, dim, 3)
        assert check_P2(f, g, n, 64), i


def test_chain_ratios(criterion):
    criterion(7, "chain_report N=2 K=12: m/k^(n+1) in [1, 1.05], m/k^n increasing and >= k-1")
    rep = chain_report(2, K=12)
    assert rep.ok
    for n in (1, 2):
        rows = [r for r in rep.ratio_table if r["n"] == n and r["k"] >= 5 and r["gap"]]
        assert rows
        prev = None
        for r in rows:
            k, m = r["k"], r["zero_order"]["value"]
            assert r["zero_order"]["kind"] == "finite"
            assert 1 <= Fraction(m, k ** (n + 1)) <= Fraction(105, 100)
            cur = Fraction(m, k**n)
            assert cur >= k - 1
            assert prev is None or cur > prev
            prev = cur


def test_chain_memberships(criterion):
    criterion(8, "f_n in i_n, not i_(n+1), in M_(n+1), not M_n for n=1..3; no pool violations")
    for n in (1, 2, 3):
        f = PatternMask(n, 1)
        assert membership_i_n(f, n).verdict == "certified_in"
        assert membership_i_n(f, n + 1).verdict == "certified_out"
        assert membership_M_n(f, n + 1).verdict == "certified_in"
        assert membership_M_n(f, n).verdict == "certified_out"
    rep = chain_report(3, K=12)
    assert rep.ok and rep.disjointness["violations"] == 0


def _prime_fixtures():
    cases = []
    for dim, (p, q) in zip((1, 2, 3, 1, 2), [((0,), (3,)), ((0, 0), (1, -1)), ((1, 0, 0), (0, 0, 2)), ((-2,), (5,)), ((2, 2), (-3, 0))]):
        cases.append(("two", Product(DiracComplement(p), DiracComplement(q)), None))
    cases.append(("two", Dirac((4,)), None))
    cases.append(("two", FiniteSupport({(0, 0): 1, (1, 1): 2}, 2), None))
    cases.append(("two", Const(0, 3), None))
    cases.append(("two", Product(DiracComplement((1, 2)), Product(DiracComplement((0, 0)), InvNormPower(2, 2))), None))
    for p in [(0,), (7,), (1, -1), (0, 0), (2, 0, -1), (0, 0, 0)]:
        cases.append(("fixed", DiracComplement(p), p))
    cases.append(("fixed", Product(DiracComplement((3,)), InvNormPower(1, 1)), (3,)))
    cases.append(("fixed", ScalarMul(5, DiracComplement((1, 1))), (1, 1)))
    for dim in (1, 2, 3):
        cases.append(("unit", Const(1, dim), None))
    assert len(cases) == 20
    return cases


def test_prime_classifier(criterion):
    criterion(9, "prime classifier on the 20-case fixture suite")
    for kind, d, point in _prime_fixtures():
        v = classify_principal_prime(d, Window(R, d.dim))
        if kind == "two":
            assert isinstance(v, NotPrime), d
            assert same(values(v.a, d.dim) * values(v.b, d.dim), values(d, d.dim))
            for z in v.zeros:
                assert evaluate(d, z) == 0
        elif kind == "fixed":
            assert isinstance(v, FixedMaximal) and v.point == point, d
        else:
            assert isinstance(v, NotProper), d


def test_separator(criterion):
    criterion(10, "separator lies in m_n1 and outside m_n2 on 100 random pairs")
    rng = random.Random(1010)
    done = 0
    while done < 100:
        dim = rng.randint(1, 3)
        a, b = rand_point(rng, dim, 20), rand_point(rng, dim, 20)
        if a == b:
            continue
        s = separator(a, b)
        assert evaluate(s, a) == 0 and evaluate(s, b) != 0
        assert fixed_maximal_member(s, a) and not fixed_maximal_member(s, b)
        done += 1


def test_maximality_witness(criterion):
    criterion(11, "g + f/f(k) = 1 exactly on R=50 for 50 random (f, k)")
    rng = random.Random(1111)
    done = 0
    while done < 50:
        dim = 1 + done % 3
        f, k = rand_expr(rng, dim), rand_point(rng, dim)
        fk = evaluate(f, k)
        if not fk:
            continue
        w = maximality_witness(k, f, Window(R, dim))
        assert w.unit_check and evaluate(w.g, k) == 0
        total = values(w.g, dim) + values(ScalarMul(1 / fk, f), dim)
        assert same(total, values(Const(1, dim), dim)), done
        done += 1


_REPLAY = """
import io, sys
sys.path.insert(0, "tests")
from golden_cases import CASES
from polygrowth.cli import run
for name, argv, code in CASES:
    out, err = io.StringIO(), io.StringIO()
    got = run(argv, out, err)
    sys.stdout.write(f"== {name} {got}\\n" + out.getvalue())
"""


def _replay(seed: str) -> bytes:
    env = dict(os.environ, PYTHONHASHSEED=seed)
    return subprocess.run([sys.executable, "-c", _REPLAY], cwd=ROOT, env=env, capture_output=True, check=True).stdout


def test_cli_determinism(criterion):
    criterion(12, "two runs of the CLI golden suite are byte-identical")
    first, second = _replay("1"), _replay("2")
    assert first == second
    assert first.count(b"\n== ") + 1 == len(CASES)
