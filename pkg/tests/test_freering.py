from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lienil.freering import (
    MultiDegree,
    ParseError,
    Polynomial,
    bracket,
    format_polynomial,
    multiset_permutations,
    parse,
    substitute,
)

words = st.lists(st.integers(1, 3), min_size=0, max_size=3).map(tuple)
polys = st.dictionaries(words, st.integers(-4, 4), max_size=5).map(Polynomial)


# -- ring axioms -------------------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert a * Polynomial.one() == a == Polynomial.one() * a
    assert a - a == Polynomial.zero()


@settings(max_examples=100, deadline=None)
@given(polys, polys, polys, st.integers(-3, 3))
def test_bracket_bilinear_and_jacobi(a, b, c, k):
    assert bracket(a + b, c) == bracket(a, c) + bracket(b, c)
    assert bracket(a * k, b) == bracket(a, b) * k
    assert bracket(a, b) == -bracket(b, a)
    jac = bracket(a, b, c) + bracket(b, c, a) + bracket(c, a, b)
    assert jac == Polynomial.zero()


@settings(max_examples=100, deadline=None)
@given(polys)
def test_components_partition(p):
    comps = p.components()
    total = Polynomial.zero()
    for d, c in comps.items():
        assert c.multidegree() == d
        total = total + c
    assert total == p


@settings(max_examples=80, deadline=None)
@given(polys, polys, polys, polys)
def test_substitution_is_a_ring_map(a, b, u, v):
    s = {1: u, 2: v, 3: u * v}
    assert substitute(a * b, s) == substitute(a, s) * substitute(b, s)
    assert substitute(a + b, s) == substitute(a, s) + substitute(b, s)
    assert substitute(bracket(a, b), s) == bracket(substitute(a, s), substitute(b, s))


@settings(max_examples=150, deadline=None)
@given(polys)
def test_format_parse_round_trip(p):
    assert parse(format_polynomial(p)) == p


# -- examples ----------------------------------------------------------------


def test_commutator_expansions():
    x1, x2, x3 = (Polynomial.var(i) for i in (1, 2, 3))
    assert bracket(x1, x2) == x1 * x2 - x2 * x1
    t = bracket(x1, x2, x3)
    assert len(t) == 4
    assert format_polynomial(t) == "x1*x2*x3 - x2*x1*x3 - x3*x1*x2 + x3*x2*x1"
    assert len(bracket(*(Polynomial.var(i) for i in range(1, 5)))) == 8
    assert bracket(x1, x1) == Polynomial.zero()


def test_parser_features():
    assert parse("[x1,x2]") == bracket(Polynomial.var(1), Polynomial.var(2))
    assert parse("[x1*x2, x3]") == parse("x1*x2*x3 - x3*x1*x2")
    assert parse("2*(x1 + x2)*(x1 + x2)") == parse("2*x1*x1 + 2*x1*x2 + 2*x2*x1 + 2*x2*x2")
    assert parse("-x1 + 3") == Polynomial({(1,): -1, (): 3})
    assert parse("[x1,x2,x3]") == bracket(parse("[x1,x2]"), Polynomial.var(3))


@pytest.mark.parametrize("bad", ["x1 +", "[x1]", "(x1", "x0", "x1 ** 2", ""])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse(bad)


def test_components_example():
    comps = parse("x1*x1*x1 + 2*x1*x2*x1 - x1*x1*x2").components()
    assert comps == {MultiDegree((3,)): parse("x1*x1*x1"), MultiDegree((2, 1)): parse("2*x1*x2*x1 - x1*x1*x2")}


def test_multidegree_basics():
    d = MultiDegree.parse("2,1,0")
    assert d == MultiDegree((2, 1))
    assert d.total == 3
    assert MultiDegree((1, 0, 2)).letters() == (1, 3, 3)
    assert len(MultiDegree((2, 1, 1)).monomials()) == 12
    assert MultiDegree.of_word((3, 1, 3)) == MultiDegree((1, 0, 2))
    assert MultiDegree.from_dict({2: 1, 1: 2}) == MultiDegree((2, 1))
    assert MultiDegree.multilinear(4).is_multilinear()


def test_multiset_permutations_counts():
    assert len(list(multiset_permutations((1, 1, 2, 3)))) == 12
    assert len(set(multiset_permutations((1, 2, 3, 4)))) == 24


def test_not_multihomogeneous():
    with pytest.raises(ValueError):
        parse("x1 + x2").multidegree()
    with pytest.raises(ValueError):
        substitute(parse("x1*x4"), {1: Polynomial.var(2)})
