import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lagtor.errors import GroupMismatch, HypothesisViolation, NonPositiveResult
from lagtor.exactnum import TRIVIAL_BASIS, SymBasis, sqrt_enclosure, vector, word_product, zmod_from_generators
from lagtor.oracle import low_exists
from lagtor.pathengine import (
    Move,
    MovePath,
    apply_move,
    is_low_admissible,
    leq_perm,
    low_path,
    make_minimal_primitive,
    path_rank1,
    path_rank2_k2,
    path_shared_primitive,
)
from lagtor.pathengine.moves import Walk

B = TRIVIAL_BASIS
BETA = SymBasis([("beta", Fraction(141, 100), Fraction(142, 100))])
# tight enclosures of sqrt(2) and sqrt(3): the general recursion produces
# coefficients in the hundreds, beyond what a width-0.01 enclosure can order
TWO = SymBasis([("beta", *sqrt_enclosure(2)), ("gamma", *sqrt_enclosure(3))])
ROOT2 = SymBasis([("beta", *sqrt_enclosure(2))])


def v(*xs):
    return vector(B, xs)


def moves(text):
    return [Move(t[0], int(t[2]), int(t[3])) for t in text.split()]


def group(x):
    return zmod_from_generators(list(x), x[0].basis)


def assert_good(p, d, e):
    assert p.start == tuple(d) and p.end == tuple(e)
    assert is_low_admissible(p, d, e)
    g = group(d)
    for s in p.states:
        assert all(x.sign() > 0 for x in s)
        assert group(s) == g


# ------------------------------------------------------------ moves


def test_apply_move_examples():
    assert apply_move(v(1, 1), Move("P", 2, 1)) == v(1, 2)
    assert apply_move(v(2, 3), Move("M", 2, 1)) == v(2, 1)
    with pytest.raises(NonPositiveResult):
        apply_move(v(2, 3), Move("M", 1, 2))
    assert apply_move(v(2, 3), Move("I", 1, 2)) == v(3, 2)


def test_leq_perm_examples():
    assert leq_perm(v(2, 1), v(1, 3))
    assert not leq_perm(v(1, 3), v(2, 2))
    assert leq_perm(v(4, 5, 6), v(4, 5, 6))


def test_is_low_examples():
    assert is_low_admissible(MovePath(v(2, 4), moves("M_21")), v(2, 4), v(2, 2))
    assert is_low_admissible(MovePath(v(1, 1), moves("P_21")), v(1, 1), v(1, 2))
    assert not is_low_admissible(MovePath(v(1, 1), moves("P_12 M_12")), v(1, 1), v(1, 1))


def test_reversal_swaps_p_and_m():
    p = MovePath(v(3, 5, 2), moves("P_12 M_23 I_13 P_31"))
    r = p.reversed()
    assert r.start == p.end and r.end == p.start
    assert [m.kind for m in r.moves] == ["M", "I", "P", "M"]


# ------------------------------------------------------------ constructions


def test_rank1_examples():
    p = path_rank1(v(4, 6), v(2, 2))
    assert_good(p, v(4, 6), v(2, 2))
    assert_good(path_rank1(v(2, 3), v(1, 1)), v(2, 3), v(1, 1))
    assert len(path_rank1(v(3, 3), v(3, 3))) == 0


def test_rank2_examples():
    one, beta = BETA.const(1), BETA.symbol("beta")
    d = (one, beta)
    p = path_rank2_k2(d, (one + beta, beta))
    assert [str(m) for m in p.moves] == ["P_12"]
    p = path_rank2_k2(d, (beta, one))
    assert [str(m) for m in p.moves] == ["I_12"]
    e = (beta - one, one)
    assert_good(path_rank2_k2(d, e), d, e)
    with pytest.raises(HypothesisViolation):
        path_rank2_k2(v(2, 3), v(3, 2))


def test_minimal_primitive_examples():
    p, end = make_minimal_primitive(v(2, 3, 4))
    assert end[-1] == B.const(1)
    assert is_low_admissible(p, v(2, 3, 4), end)
    assert low_exists((2, 3, 4), tuple(int(x.coeffs[0]) for x in end))
    p, end = make_minimal_primitive(v(2, 4, 6))
    assert end[-1] == B.const(2)
    assert len(make_minimal_primitive(v(1, 1))[0]) == 0


def test_shared_primitive_examples():
    assert len(path_shared_primitive(v(3, 1), v(3, 1), 2)) == 0
    assert_good(path_shared_primitive(v(4, 1), v(2, 1), 2), v(4, 1), v(2, 1))
    with pytest.raises(HypothesisViolation):
        path_shared_primitive(v(4, 2), v(2, 2), 1)


def test_q_gadget_sequence():
    w = Walk(v(1, 3))
    w.M(2, 1)
    w.I(1, 2)
    w.P(2, 1)
    p = w.path()
    assert [tuple(int(x.coeffs[0]) for x in s) for s in p.states] == [(1, 3), (1, 2), (2, 1), (2, 3)]
    assert max(x for s in p.states for x in s) <= B.const(3)


def test_low_path_examples():
    p = low_path(v(2, 4), v(2, 2))
    assert [str(m) for m in p.moves] == ["M_21"]
    p = low_path(v(1, 2, 3), v(2, 1, 3))
    assert all(m.kind == "I" for m in p.moves)
    assert_good(low_path(v(2, 3), v(5, 3)), v(2, 3), v(5, 3))
    with pytest.raises(GroupMismatch):
        low_path(v(2, 4), v(3, 3))


def test_general_strategy_on_integers():
    rng = random.Random(11)
    for _ in range(150):
        k = rng.randint(2, 4)
        d = [rng.randint(1, 12) for _ in range(k)]
        e = [rng.randint(1, 12) for _ in range(k)]
        g = gcd(*d)
        e = [x * g for x in e]
        if gcd(*e) != g:
            continue
        assert_good(low_path(v(*d), v(*e), strategy="general"), v(*d), v(*e))


def _symbolic_instance(rng, basis, k, steps=6):
    gens = [basis.const(1)] + [basis.symbol(n) for n in basis.names[1:]]
    d = []
    for i in range(k):
        x = gens[i % len(gens)] * rng.randint(1, 3) + basis.const(rng.randint(0, 2))
        d.append(x)
    letters = []
    for _ in range(rng.randint(1, steps)):
        kind = rng.choice("PQI")
        if kind == "Q":
            letters.append(("Q", rng.randint(1, k)))
        else:
            i, j = rng.sample(range(1, k + 1), 2)
            letters.append((kind, i, j))
    a = word_product(letters, k)
    e = []
    for row in a:
        x = basis.zero()
        for c, y in zip(row, d):
            x = x + y * c
        e.append(-x if x.sign() < 0 else x)
    return tuple(d), tuple(e)


def test_symbolic_three_components():
    rng = random.Random(3)
    done = 0
    for _ in range(60):
        d, e = _symbolic_instance(rng, TWO, 3)
        if any(x.is_zero() for x in e):
            continue
        assert_good(low_path(d, e), d, e)
        done += 1
    assert done >= 40


def test_symbolic_rank2_with_three_components():
    rng = random.Random(4)
    for _ in range(40):
        d, e = _symbolic_instance(rng, ROOT2, 3)
        if any(x.is_zero() for x in e):
            continue
        assert_good(low_path(d, e), d, e)


# ------------------------------------------------------------ properties


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(1, 15), min_size=2, max_size=4), st.data())
def test_low_path_property(d, data):
    k = len(d)
    e = data.draw(st.lists(st.integers(1, 15), min_size=k, max_size=k))
    gd, ge = gcd(*d), gcd(*e)
    if gd != ge:
        with pytest.raises(GroupMismatch):
            low_path(v(*d), v(*e))
        return
    p = low_path(v(*d), v(*e))
    assert_good(p, v(*d), v(*e))
    r = p.reversed()
    assert r.start == p.end and r.end == p.start
    assert is_low_admissible(r, v(*e), v(*d))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 30), min_size=2, max_size=4))
def test_minimal_primitive_property(u):
    p, end = make_minimal_primitive(v(*u))
    assert is_low_admissible(p, v(*u), end)
    assert end[-1] == min(end)
    assert group(end) == group(v(*u))


def test_without_loops_removes_cycles():
    p = MovePath(v(2, 3), moves("P_12 M_12 I_12 I_12 M_21"))
    q = p.without_loops()
    assert [str(m) for m in q.moves] == ["M_21"]
    assert q.end == p.end and q.start == p.start


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from(["P_12", "M_12", "P_21", "I_12", "P_13", "M_13", "I_23"]), max_size=12))
def test_without_loops_property(word):
    start = v(50, 40, 30)
    try:
        p = MovePath(start, moves(" ".join(word)))
    except NonPositiveResult:
        return
    q = p.without_loops()
    replay = MovePath(q.start, q.moves)
    assert replay.states == q.states and q.end == p.end
    keys = [tuple(x.coeffs for x in s) for s in q.states]
    assert len(set(keys)) == len(keys)
    assert set(keys) <= {tuple(x.coeffs for x in s) for s in p.states}
