from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lienil.freering import MultiDegree, Polynomial, bracket
from lienil.generators import component, component_lattice
from lienil.specht import (
    Commutator,
    CommutatorProduct,
    derangements,
    enumerate_cset,
    enumerate_dset,
    enumerate_specht_basis,
    gamma_component_span,
    prefix_gamma_decompose,
    reassemble,
    w_prime_generators,
    w_prime_specht,
    w_quotient_basis,
)
from lienil.torsion import gamma_rank, listed_specht

x = Polynomial.var


def test_commutator_product_expansion():
    cp = CommutatorProduct.of((1, 2), (3, 4, 5))
    assert cp.expand() == bracket(x(1), x(2)) * bracket(x(3), x(4), x(5))
    assert str(cp) == "[x1,x2][x3,x4,x5]"
    assert str(CommutatorProduct()) == "1"
    assert CommutatorProduct().expand() == Polynomial.one()
    assert CommutatorProduct.c_index((1, 2, 3, 4, 5)) == cp
    with pytest.raises(ValueError):
        Commutator((1,))
    with pytest.raises(ValueError):
        CommutatorProduct.c_index((1, 2, 3, 4))


@pytest.mark.parametrize("n, size", [(2, 1), (3, 2), (4, 9), (5, 44), (6, 265)])
def test_specht_counts(n, size):
    basis = enumerate_specht_basis(n)
    assert len(basis) == size == derangements(n)
    assert all(cp.is_specht() for cp in basis)
    assert len(set(basis)) == size


@pytest.mark.parametrize("n", [4, 5])
def test_specht_listings(n):
    assert set(enumerate_specht_basis(n)) == set(listed_specht(n))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_specht_is_a_basis_of_gamma_part(n):
    assert gamma_rank(n) == derangements(n)


def test_derangements():
    assert [derangements(n) for n in range(8)] == [1, 0, 1, 2, 9, 44, 265, 1854]


def test_c_and_d_sets():
    assert len(enumerate_dset(1)) == 20
    cs = enumerate_cset(1)
    assert len(cs) == 20
    assert CommutatorProduct.c_index((2, 1, 5, 3, 4)) in cs
    for w in enumerate_dset(1):
        assert w[0] > w[1] and w[2] > w[3] and w[2] > w[4]


def test_w_prime_lies_in_t4():
    d = MultiDegree.multilinear(5)
    t4 = component_lattice("t4", d)
    comp = component(d)
    for cp in w_prime_generators(5):
        assert t4.contains(comp.vector(cp.terms()))
    assert len(w_prime_specht(5)) == 24
    assert len(w_quotient_basis(5)) == 20


def test_gamma_span_normalized():
    for cp in gamma_component_span(MultiDegree((2, 1, 1))):
        assert all(c.vars[0] < c.vars[1] for c in cp.factors)
        assert cp.in_p()


small_words = st.lists(st.integers(1, 3), min_size=1, max_size=4).map(tuple)


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(small_words, st.integers(-3, 3), max_size=4))
def test_decomposition_round_trip(terms):
    p = Polynomial(terms)
    pieces = prefix_gamma_decompose(p)
    assert reassemble(pieces) == p
    prefixes = [w for w, _ in pieces]
    assert len(set(prefixes)) == len(prefixes)
    for w, _ in pieces:
        assert list(w) == sorted(w)


def test_decomposition_example_and_uniqueness():
    p = x(2) * x(1) + x(1) * x(2)
    pieces = prefix_gamma_decompose(p)
    # x2 x1 = x1 x2 - [x1,x2], so p = 2 x1 x2 - [x1,x2]
    assert pieces == [((), -bracket(x(1), x(2))), ((1, 2), Polynomial.one() * 2)]
    # a second decomposition of the same element agrees
    assert prefix_gamma_decompose(reassemble(pieces)) == pieces
