"""The nine acceptance criteria, each at its stated tolerance.

A one-line PASS/FAIL per criterion is printed in the terminal summary
(see conftest.py).
"""
import itertools
import json
import math
import random
import time
from fractions import Fraction
from math import gcd

import numpy as np
import pytest

from conftest import note
from lagtor.ambient import (
    ShiftVerdict,
    aspherical,
    group_Ga,
    is_special,
    load_preset,
    shift_equiv,
)
from lagtor.cli import main
from lagtor.exactnum import TRIVIAL_BASIS, SymBasis, vector, zmod_from_generators
from lagtor.invariants import BallVerdict, TorusSpec, displacement_energy, equiv, obstruct_ball, torus_invariants
from lagtor.jsonio import certificate_to_json, path_to_json
from lagtor.numlab import (
    area_line_annulus,
    check_step1_ball,
    circle_loop,
    isoperimetric_check,
    psi_ms_cartesian,
    random_domain_points,
    random_trig_loop,
    symplectic_defect,
)
from lagtor.oracle import NOT_FOUND, bfs_low_path, low_exists
from lagtor.pathengine import (
    FailureKind,
    certificate,
    check_certificate,
    check_path,
    is_low_admissible,
    low_path,
    path_rank2_k2,
)

BETA = SymBasis([("beta", Fraction(141, 100), Fraction(142, 100))])
B = TRIVIAL_BASIS


def ints(*xs):
    return vector(B, xs)


def _gcd(t):
    g = 0
    for x in t:
        g = gcd(g, x)
    return g


def _lift(d):
    """Torus (1, 1+d_1, ..., 1+d_k): ua = 1, m = 1, stripped vector d."""
    one = d[0].basis.const(1)
    return TorusSpec((one,) + tuple(one + x for x in d))


# ------------------------------------------------------------ sweep (criteria 3, 5)


@pytest.fixture(scope="module")
def integer_sweep():
    """low_path on every equal-gcd ordered pair, k <= 3, components 1..10."""
    t0 = time.perf_counter()
    vecs = {}
    pairs = 0
    failures = []
    paths = {}
    for k in (1, 2, 3):
        tuples = list(itertools.product(range(1, 11), repeat=k))
        by_gcd = {}
        for t in tuples:
            by_gcd.setdefault(_gcd(t), []).append(t)
            vecs[t] = ints(*t)
        for group in by_gcd.values():
            for d in group:
                vd = vecs[d]
                for e in group:
                    ve = vecs[e]
                    pairs += 1
                    try:
                        p = low_path(vd, ve)
                    except Exception as exc:  # recorded, asserted below
                        failures.append((d, e, repr(exc)))
                        continue
                    if not (p.start == vd and p.end == ve and is_low_admissible(p, vd, ve)):
                        failures.append((d, e, "not low admissible"))
                    if (d, e) not in paths and len(paths) < 2000 and random.Random(hash((d, e))).random() < 0.003:
                        paths[(d, e)] = p
    elapsed = time.perf_counter() - t0
    return {"pairs": pairs, "failures": failures, "paths": paths, "vecs": vecs, "elapsed": elapsed}


@pytest.fixture(scope="module")
def oracle_sweep():
    """Oracle existence on every ordered pair (equal gcd or not), k <= 3."""
    t0 = time.perf_counter()
    disagreements = []
    checked = 0
    for k in (1, 2, 3):
        tuples = list(itertools.product(range(1, 11), repeat=k))
        for d in tuples:
            gd = _gcd(d)
            for e in tuples:
                found = low_exists(d, e)
                checked += 1
                if found != (gd == _gcd(e)):
                    disagreements.append((d, e, found))
    return {"checked": checked, "disagreements": disagreements, "elapsed": time.perf_counter() - t0}


# ------------------------------------------------------------ rank-2 instances (criteria 4, 5)

_GL2 = {
    "P": ((1, 1), (0, 1)),
    "Pinv": ((1, -1), (0, 1)),
    "I": ((0, 1), (1, 0)),
    "Q1": ((-1, 0), (0, 1)),
}


def _matmul(x, y):
    return tuple(tuple(sum(x[i][t] * y[t][j] for t in range(2)) for j in range(2)) for i in range(2))


def _rank2_instances(count=200, seed=20240):
    rng = random.Random(seed)
    one, beta = BETA.const(1), BETA.symbol("beta")
    d = (one, beta)
    out = []
    for _ in range(count):
        a = ((1, 0), (0, 1))
        for _ in range(rng.randint(1, 6)):
            a = _matmul(_GL2[rng.choice(sorted(_GL2))], a)
        e = []
        for row in a:
            x = d[0] * row[0] + d[1] * row[1]
            e.append(-x if x.sign() < 0 else x)
        out.append((a, d, tuple(e)))
    return out


@pytest.fixture(scope="module")
def rank2_results():
    rows = []
    for a, d, e in _rank2_instances():
        t0 = time.perf_counter()
        p = path_rank2_k2(d, e)
        dt = time.perf_counter() - t0
        rows.append((a, d, e, p, dt))
    return rows


# ------------------------------------------------------------ criteria


def test_criterion_1_invariant_engine():
    cases = []
    for a in ((1, 2, 3), (1, 3, 5)):
        t0 = time.perf_counter()
        inv = torus_invariants(TorusSpec(ints(*a)))
        cases.append((a, inv, time.perf_counter() - t0))
    inv = cases[0][1]
    assert inv.ua == B.const(1) and inv.m == 1
    assert inv.total == B.const(6) and inv.norm == B.const(7)
    assert inv.gamma == zmod_from_generators(ints(1), B)
    assert cases[1][1].gamma == zmod_from_generators(ints(2), B)
    t0 = time.perf_counter()
    assert equiv(TorusSpec(ints(1, 3, 5)), TorusSpec(ints(1, 3, 3))) is True
    t_eq1 = time.perf_counter() - t0
    t0 = time.perf_counter()
    assert equiv(TorusSpec(ints(1, 2, 3)), TorusSpec(ints(1, 3, 5))) is False
    t_eq2 = time.perf_counter() - t0
    worst = max([c[2] for c in cases] + [t_eq1, t_eq2])
    note(1, f"slowest call {worst * 1e3:.3f} ms")
    assert worst < 1e-3


def _random_rational(rng, lo, hi, den=12):
    return Fraction(rng.randint(lo * den, hi * den), den)


def test_criterion_2_displacement_energy():
    rng = random.Random(2)
    for _ in range(100):
        k = rng.randint(1, 5)
        a = [_random_rational(rng, 1, 10) for _ in range(k)]
        norm = sum(a) + min(a)
        b = norm + _random_rational(rng, 0, 3)
        t = TorusSpec(vector(B, a), B.const(b))
        assert displacement_energy(t) == B.const(min(a))
    checked = 0
    while checked < 100:
        k = rng.randint(1, 5)
        a = [Fraction(rng.randint(1, 40), 4) for _ in range(k)]
        distinct = sorted(set(a))
        gap = distinct[1] - distinct[0] if len(distinct) > 1 else distinct[0]
        bound = min(gap, distinct[0]) / 2
        s = [Fraction(rng.randint(-999, 999), 1000) * bound for _ in range(k)]
        shifted = [x + y for x, y in zip(a, s)]
        b = max(sum(a) + min(a), sum(shifted) + min(shifted)) + 1
        t = TorusSpec(vector(B, a), B.const(b))
        got = displacement_energy(t, vector(B, s))
        assert got == B.const(min(shifted))
        ua = min(a)
        assert got == B.const(ua + min(y for x, y in zip(a, s) if x == ua))
        checked += 1


def test_criterion_3_integer_sweep(integer_sweep, oracle_sweep):
    assert integer_sweep["failures"] == []
    assert oracle_sweep["disagreements"] == []
    vecs = integer_sweep["vecs"]
    # sampled paths also pass the independent replay checker, and the
    # oracle's own paths pass is_low_admissible
    for (d, e), p in integer_sweep["paths"].items():
        check_path(vecs[d], p.moves, vecs[e])
        q = bfs_low_path(d, e)
        assert q is not NOT_FOUND and is_low_admissible(q, vecs[d], vecs[e])
    total = integer_sweep["elapsed"] + oracle_sweep["elapsed"]
    note(3, f"{integer_sweep['pairs']} low_path pairs, {oracle_sweep['checked']} oracle pairs, {total:.1f} s")
    assert total < 300


def test_criterion_4_rank2_symbolic(rank2_results):
    assert len(rank2_results) == 200
    slowest = 0.0
    for a, d, e, p, dt in rank2_results:
        assert p.start == d and p.end == e
        assert is_low_admissible(p, d, e)
        check_path(d, p.moves, e)
        slowest = max(slowest, dt)
    note(4, f"slowest instance {slowest * 1e3:.1f} ms")
    assert slowest < 1.0


def test_criterion_5_certificate_bound(integer_sweep, rank2_results):
    t0 = time.perf_counter()
    vecs = integer_sweep["vecs"]
    tori = {}
    count = 0
    for k in (1, 2, 3):
        by_gcd = {}
        for t in itertools.product(range(1, 11), repeat=k):
            by_gcd.setdefault(_gcd(t), []).append(t)
        for group in by_gcd.values():
            for d in group:
                td = tori.get(d) or tori.setdefault(d, _lift(vecs[d]))
                for e in group:
                    te = tori.get(e) or tori.setdefault(e, _lift(vecs[e]))
                    cert = certificate(td, te)
                    assert cert.overall_ball <= cert.bound
                    count += 1
    for _, d, e, _, _ in rank2_results:
        cert = certificate(_lift(d), _lift(e))
        assert cert.overall_ball <= cert.bound
        assert check_certificate(cert) == cert.overall_ball
        count += 1
    cert = certificate(TorusSpec(ints(1, 3, 5)), TorusSpec(ints(1, 3, 3)))
    assert cert.overall_ball == B.const(10) == cert.bound
    note(5, f"{count} certificates, {time.perf_counter() - t0:.1f} s")


def test_criterion_6_ball_obstruction():
    t, t2 = TorusSpec(ints(1, 3, 5)), TorusSpec(ints(1, 3, 3))
    bs = sorted({Fraction(9) + Fraction(p, q) for q in range(1, 30) for p in range(q)})
    for b in bs:
        assert obstruct_ball(t, t2, B.const(b)) is BallVerdict.OBSTRUCTED
    assert obstruct_ball(t, t2, B.const(10)) is BallVerdict.CERTIFIABLY_ISOTOPIC
    note(6, f"{len(bs)} rational b in [9, 10)")


def test_criterion_7_shift_example():
    m = load_preset("s2xs2:3,4")
    assert is_special(m)
    assert group_Ga(m, B.const(Fraction(1, 2)), restrict_to_s0=True) == zmod_from_generators(ints(1), B)
    c, d, e = B.const(1), ints(1), ints(2)
    assert shift_equiv(m, c, d, e).verdict is ShiftVerdict.EQUIVALENT_FOR_SMALL_A
    assert shift_equiv(aspherical(), c, d, e).verdict is ShiftVerdict.NOT_IMPLIED
    assert shift_equiv(load_preset("aspherical"), c, d, e).verdict is ShiftVerdict.NOT_IMPLIED


def test_criterion_8_numlab():
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    worst = 0.0
    for m, s in ((1, 0.0), (0, 0.0), (2, 0.5), (-1, 1.0)):
        for x in random_domain_points(m, s, 1000, rng):
            worst = max(worst, symplectic_defect(lambda y: psi_ms_cartesian(m, s, y), x))
    assert worst <= 1e-9
    excess = -math.inf
    for a, c, d in itertools.product((0.5, 1.0, 2.0), repeat=3):
        for k in range(11):
            excess = max(excess, check_step1_ball(a, c, d, k / 10, 1000, rng) - (4 * a + c + 2 * d))
    assert excess <= 1e-9
    area = area_line_annulus(1.0, 2.0)
    assert abs(area - 3 * math.pi) <= 1e-6 * 3 * math.pi
    for _ in range(200):
        lhs, _, slack = isoperimetric_check(random_trig_loop(rng))
        assert slack >= -1e-6 * max(1.0, lhs)
    for r in (0.3, 1.0, 2.5):
        lhs, _, slack = isoperimetric_check(circle_loop(r))
        assert abs(slack) <= 1e-6 * max(1.0, lhs)
    elapsed = time.perf_counter() - t0
    note(8, f"max Jacobian defect {worst:.1e}, step-1 excess {excess:.1e}, {elapsed:.1f} s")
    assert elapsed < 60


# ------------------------------------------------------------ criterion 9


def _cli_check(tmp_path, doc, name):
    f = tmp_path / f"{name}.json"
    f.write_text(json.dumps(doc))
    return f


def _mutants():
    """(name, document, expected failure class)."""
    cert = certificate_to_json(certificate(TorusSpec(ints(1, 3, 5)), TorusSpec(ints(1, 3, 3))))
    cert2 = certificate_to_json(certificate(TorusSpec(ints(1, 4, 7, 9)), TorusSpec(ints(1, 9, 4, 3))))
    cert3 = certificate_to_json(certificate(TorusSpec(ints(1, 4, 7)), TorusSpec(ints(7, 1, 4))))
    path = path_to_json(low_path(ints(4, 6), ints(2, 2)))
    path2 = path_to_json(low_path(ints(2, 3, 5), ints(5, 3, 2)))
    out = []

    def mut(base, name, kind, fn):
        doc = json.loads(json.dumps(base))
        fn(doc)
        out.append((name, doc, kind))

    step2 = next(n for n, s in enumerate(cert2["steps"]) if s["kind"] == "Step2Apply")
    assert [s["kind"] for s in cert3["steps"]] == ["UnitaryPermutation"]

    # wrong move
    mut(cert, "cert_direction_flipped", FailureKind.WRONG_MOVE,
        lambda d: d["steps"][0].update(direction="forward"))
    mut(cert, "cert_index_swapped", FailureKind.WRONG_MOVE,
        lambda d: d["steps"][0].update(i=d["steps"][0]["j"], j=d["steps"][0]["i"]))
    mut(cert, "cert_unknown_kind", FailureKind.WRONG_MOVE, lambda d: d["steps"][0].update(kind="Shear"))
    mut(cert3, "cert_bad_perm", FailureKind.WRONG_MOVE, lambda d: d["steps"][0].update(perm=[1, 1, 2]))
    mut(path, "path_self_move", FailureKind.WRONG_MOVE, lambda d: d["moves"][0].update(j=d["moves"][0]["i"]))
    mut(path, "path_unknown_kind", FailureKind.WRONG_MOVE, lambda d: d["moves"][0].update(kind="X"))
    mut(path2, "path_index_out_of_range", FailureKind.WRONG_MOVE, lambda d: d["moves"][0].update(i=7))
    # negative component
    mut(cert, "cert_negative_target", FailureKind.NON_POSITIVE, lambda d: d["steps"][0]["to"].__setitem__(2, ["-1"]))
    mut(cert, "cert_negative_start", FailureKind.NON_POSITIVE, lambda d: d["start"].__setitem__(0, ["-1"]))
    mut(cert2, "cert_zero_source", FailureKind.NON_POSITIVE, lambda d: d["steps"][step2]["from"].__setitem__(0, ["0"]))
    mut(path, "path_negative_start", FailureKind.NON_POSITIVE, lambda d: d["start"].__setitem__(1, ["-6"]))
    mut(path, "path_overdrawn", FailureKind.NON_POSITIVE,
        lambda d: d["moves"].insert(0, {"kind": "M", "i": 1, "j": 2}))
    # inflated ball
    mut(cert, "cert_step_ball_inflated", FailureKind.BALL_MISMATCH, lambda d: d["steps"][0].update(ball=["11"]))
    mut(cert, "cert_step_ball_lowered", FailureKind.BALL_MISMATCH, lambda d: d["steps"][0].update(ball=["9"]))
    mut(cert, "cert_overall_inflated", FailureKind.BALL_MISMATCH, lambda d: d.update(overall_ball=["12"]))
    mut(cert3, "cert_perm_ball_inflated", FailureKind.BALL_MISMATCH, lambda d: d["steps"][0].update(ball=["100"]))
    # wrong endpoint
    mut(cert, "cert_target_changed", FailureKind.WRONG_ENDPOINT, lambda d: d.update(target=[["1"], ["3"], ["1"]]))
    mut(cert2, "cert_last_step_dropped", FailureKind.WRONG_ENDPOINT, lambda d: d["steps"].pop())
    mut(path, "path_end_changed", FailureKind.WRONG_ENDPOINT, lambda d: d.update(end=[["2"], ["4"]]))
    mut(path2, "path_move_dropped", FailureKind.WRONG_ENDPOINT, lambda d: d["moves"].pop())
    return out


def test_criterion_9_checker_adversarial(tmp_path, capsys):
    mutants = _mutants()
    assert len(mutants) >= 20
    wrong = []
    for name, doc, kind in mutants:
        f = _cli_check(tmp_path, doc, name)
        code = main(["check", str(f)])
        out = json.loads(capsys.readouterr().out)
        if code != 3 or out.get("failure") != kind:
            wrong.append((name, code, out.get("failure"), kind))
    note(9, f"{len(mutants)} mutants rejected")
    assert wrong == []
