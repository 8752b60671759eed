from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lagtor.errors import InputError, NotPrimitive, NotUnimodular, RefineNeeded
from lagtor.exactnum import (
    TRIVIAL_BASIS,
    Ordering,
    SymBasis,
    UnimodularMatrix,
    complement,
    complement_split,
    gl2z_word,
    glz_elementary_word,
    glz_solve,
    is_primitive,
    parse_symreal,
    saturate,
    sqrt_enclosure,
    sym_arith,
    sym_cmp,
    vector,
    word_product,
    word_product2,
    zmod_equal,
    zmod_from_generators,
    zmod_member,
    zmod_rank,
)
from lagtor.exactnum.intmat import det

BETA = SymBasis([("beta", Fraction(141, 100), Fraction(142, 100))])
B = TRIVIAL_BASIS


def beta(c0, c1):
    return BETA.real([c0, c1])


def z2():
    """Z² realized as <1, beta>."""
    return zmod_from_generators([beta(1, 0), beta(0, 1)], BETA)


def mod(*gens, basis=B):
    return zmod_from_generators(vector(basis, gens) if basis is B else list(gens), basis)


# ------------------------------------------------------------ arithmetic and comparison


def test_add_sub_scale():
    assert sym_arith("add", beta(3, 0), beta(-1, 2)) == beta(2, 2)
    x = beta(5, -3)
    assert sym_arith("sub", x, x).is_zero()
    assert sym_arith("int_scale", 3, beta(1, 2)) == beta(3, 6)


def test_coefficients_stay_exact():
    x = BETA.real([Fraction(1, 3), 2])
    y = x + x + x
    assert y.coeffs == (1, 6)
    assert type(y.coeffs[0]) is int


def test_compare_with_enclosure():
    assert sym_cmp(beta(3, 0), beta(0, 2)) is Ordering.GREATER
    assert sym_cmp(beta(7, 1), beta(7, 1)) is Ordering.EQUAL
    with pytest.raises(RefineNeeded):
        sym_cmp(BETA.const(Fraction(283, 200)), BETA.symbol("beta"))


def test_parse_expression():
    x = parse_symreal("3/2 - 2*beta", BETA)
    assert x == BETA.real([Fraction(3, 2), -2])
    with pytest.raises(InputError):
        parse_symreal("beta*beta", BETA)
    with pytest.raises(InputError):
        parse_symreal("gamma", BETA)


def test_basis_mismatch_rejected():
    with pytest.raises(Exception):
        beta(1, 0) + B.const(1)


# ------------------------------------------------------------ Z-modules


def test_hnf_examples():
    m = zmod_from_generators([beta(1, 0), beta(0, 2), beta(1, 2)], BETA)
    assert m.rank == 2
    assert m == zmod_from_generators([beta(1, 0), beta(0, 2)], BETA)
    assert m.hnf == ((1, 0), (0, 2))
    m = mod(6, 10, 15)
    assert m.rank == 1 and m.hnf == ((1,),)
    empty = zmod_from_generators([], B)
    assert empty.rank == 0 and empty.hnf == ()


def test_equality_membership_rank():
    assert zmod_equal(mod(2, 4), mod(2))
    assert not zmod_member(B.const(3), mod(2))
    assert zmod_member(B.const(4), mod(2))
    assert zmod_rank(z2()) == 2


def test_primitive():
    L = z2()
    assert not is_primitive(beta(2, 4), L)
    assert is_primitive(beta(2, 3), L)
    assert is_primitive(B.const(2), mod(2))


def test_saturate_examples():
    L = z2()
    assert saturate(zmod_from_generators([beta(2, 2)], BETA), L) == zmod_from_generators([beta(1, 1)], BETA)
    assert saturate(L, L) == L
    assert saturate(zmod_from_generators([beta(2, 0), beta(0, 3)], BETA), L) == L


def test_complement_examples():
    L = z2()
    assert complement_split(beta(1, 0), L) == zmod_from_generators([beta(0, 1)], BETA)
    lam = complement_split(beta(2, 3), L)
    assert lam.rank == 1
    assert zmod_from_generators(list(lam.generators()) + [beta(2, 3)], BETA) == L
    assert complement_split(B.const(2), mod(2)).rank == 0
    with pytest.raises(NotPrimitive):
        complement_split(beta(2, 4), L)


# ------------------------------------------------------------ GL(k, Z)


def test_glz_solve_examples():
    a = glz_solve(vector(B, [2, 3]), vector(B, [1, 1]))
    assert abs(a.determinant) == 1
    assert a.apply(vector(B, [2, 3])) == vector(B, [1, 1])
    u = vector(B, [4, 7, 9])
    assert glz_solve(u, u).apply(u) == u
    d = (BETA.const(1), BETA.symbol("beta"))
    a = glz_solve(d, (beta(1, 1), beta(0, 1)))
    assert a.entries == ((1, 1), (0, 1))


def test_gl2_words():
    assert word_product2(gl2z_word(UnimodularMatrix.of([[1, 1], [0, 1]]))) == [[1, 1], [0, 1]]
    assert gl2z_word(UnimodularMatrix.of([[1, 0], [0, 1]])) == []
    target = [[-1, 1], [2, -1]]
    word = gl2z_word(UnimodularMatrix.of(target))
    assert word_product2(word) == target
    assert len(word) <= 12


def test_elementary_words():
    assert glz_elementary_word(UnimodularMatrix.of([[0, 1], [1, 0]])) == [("I", 1, 2)]
    assert glz_elementary_word(UnimodularMatrix.of([[-1, 0], [0, 1]])) == [("Q", 1)]
    with pytest.raises(NotUnimodular):
        UnimodularMatrix.of([[2, 0], [0, 1]])


# ------------------------------------------------------------ properties

small = st.integers(min_value=-20, max_value=20)
coeff_pairs = st.lists(st.tuples(small, small), min_size=0, max_size=5)


@given(coeff_pairs)
def test_hnf_idempotent(gens):
    m = zmod_from_generators([beta(*g) for g in gens], BETA)
    assert zmod_from_generators(list(m.generators()), BETA).hnf == m.hnf


@given(coeff_pairs, coeff_pairs)
def test_equality_iff_mutual_membership(g1, g2):
    a = zmod_from_generators([beta(*g) for g in g1], BETA)
    b = zmod_from_generators([beta(*g) for g in g2], BETA)
    mutual = all(zmod_member(beta(*g), b) for g in g1) and all(zmod_member(beta(*g), a) for g in g2)
    assert zmod_equal(a, b) == mutual == (a.hnf == b.hnf)


@given(coeff_pairs.filter(lambda g: any(x or y for x, y in g)))
def test_saturation_idempotent_and_contains(gens):
    amb = z2()
    s = zmod_from_generators([beta(*g) for g in gens], BETA)
    sat = saturate(s, amb)
    assert saturate(sat, amb) == sat
    assert sat.contains_module(s)


letters = st.one_of(
    st.tuples(st.just("Q"), st.integers(1, 3)),
    st.tuples(st.just("I"), st.integers(1, 3), st.integers(1, 3)).filter(lambda t: t[1] != t[2]),
    st.tuples(st.just("P"), st.integers(1, 3), st.integers(1, 3)).filter(lambda t: t[1] != t[2]),
)


@given(st.lists(letters, max_size=8))
def test_elementary_word_round_trip(word):
    m = word_product(word, 3)
    assert word_product(glz_elementary_word(UnimodularMatrix.of(m)), 3) == m


@given(st.lists(st.sampled_from(["P", "Pinv", "I", "Q1"]), max_size=10))
def test_gl2_word_round_trip(word):
    m = word_product2(word)
    assert word_product2(gl2z_word(UnimodularMatrix.of(m))) == m


@settings(max_examples=60)
@given(st.lists(letters, min_size=1, max_size=6), st.lists(st.integers(1, 30), min_size=3, max_size=3))
def test_glz_solve_property(word, u):
    u = vector(B, u)
    v = UnimodularMatrix.of(word_product(word, 3)).apply(u)
    a = glz_solve(u, v)
    assert abs(det(a.as_lists())) == 1
    assert a.apply(u) == v


@given(small, small, small, small)
def test_compare_consistent_with_equality(a, b, c, d):
    x, y = beta(a, b), beta(c, d)
    try:
        o = sym_cmp(x, y)
    except RefineNeeded:
        # only when the difference is nonzero but its enclosure straddles 0
        assert x != y
        return
    assert (o is Ordering.EQUAL) == (x == y)


@given(st.lists(st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**4), min_size=3, max_size=3))
def test_float_sign_filter_agrees_with_enclosure(cs):
    basis = SymBasis([("beta", *sqrt_enclosure(2)), ("gamma", *sqrt_enclosure(3))])
    x = basis.real(cs)
    quick = x._float_sign()
    if quick:
        lo, hi = x.enclosure()
        assert (quick > 0 and lo > 0) or (quick < 0 and hi < 0)

