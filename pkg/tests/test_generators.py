from __future__ import annotations

import dataclasses

import pytest

from lienil import generators as gen
from lienil.freering import MultiDegree, Polynomial, bracket, parse
from lienil.generators import (
    GeneratorFamily,
    adjacent_transpositions,
    component,
    component_lattice,
    component_vectors,
    compositions_up_to,
    expand_families,
    get_spec,
    instantiate,
    lattices_equal,
    perm_sign,
    span_equal,
    union_lattice,
)
from lienil.zmodule import Lattice

x = Polynomial.var


def test_perm_sign_and_transpositions():
    assert perm_sign((1, 2, 3)) == 1
    assert perm_sign((2, 1, 3)) == -1
    assert perm_sign((2, 3, 1)) == 1
    assert adjacent_transpositions(4) == [(2, 1, 3, 4), (1, 3, 2, 4), (1, 2, 4, 3)]


def test_instantiate_definitional_families():
    assert instantiate(GeneratorFamily("TnDEF", 4), [x(1), x(2), x(3), x(4)]) == bracket(x(1), x(2), x(3), x(4))
    cube = instantiate(GeneratorFamily("T32DEF"), [x(i) for i in range(1, 6)])
    assert cube == bracket(x(1), x(2)) * bracket(x(3), x(4), x(5))
    a = [parse("x1*x2"), x(3), x(1), x(2)]
    assert instantiate(GeneratorFamily("TnDEF", 4), a) == bracket(*a)


def test_instantiate_letter_families():
    c33 = instantiate(GeneratorFamily("C33"), [x(i) for i in range(1, 7)])
    assert c33 == bracket(x(1), x(2), x(3)) * bracket(x(4), x(5), x(6))
    with pytest.raises(ValueError):
        instantiate(GeneratorFamily("C33"), [x(1)])


def test_compositions_cover_total_degree_six():
    ds = compositions_up_to(6)
    assert len(ds) == 63
    assert len(set(ds)) == 63
    assert MultiDegree((2, 1, 1, 1, 1)) in ds


def test_component_basics():
    c = component(MultiDegree.multilinear(4))
    assert c.dim == 24
    p = bracket(x(1), x(2), x(3), x(4))
    assert c.polynomial(c.vector(p)) == p


def test_t4_p4_has_no_torsion():
    lat = component_lattice("t4", MultiDegree.multilinear(4))
    assert lat.rank == 6
    assert set(lat.elementary_divisors()) == {1}


def test_t4_in_t32_componentwise():
    for d in compositions_up_to(5):
        t4 = component_lattice("t4", d)
        t32 = component_lattice("t32", d)
        assert t32.contains_lattice(t4)


@pytest.mark.parametrize("d", [(1, 1, 1, 1, 1), (2, 1, 1, 1), (1, 2, 1, 1), (3, 1, 1)])
def test_letter_generators_match_definition(d):
    d = MultiDegree(d)
    t4 = component_lattice("t4", d)
    for name in ("thm13", "cor15", "lemma32left"):
        assert lattices_equal(component_lattice(name, d), t4), name


def test_left_form_spans_two_sided_component():
    # a0 [a1,a2,a3,a4] with monomial slots and no right cofactor loses nothing
    left_spec = dataclasses.replace(get_spec("t4"), name="t4-left", closure="left")
    for d in compositions_up_to(6):
        comp = component(d)
        left = Lattice(comp.dim)
        for t in gen.iter_instances(left_spec, d):
            left.add(comp.vector(t))
        assert lattices_equal(left, component_lattice("t4", d)), d


def test_sigma_modes_agree():
    spec = get_spec("cor15")
    for d in [MultiDegree.multilinear(5), MultiDegree((2, 1, 1, 1))]:
        cox = component_vectors(spec, d, sigma_mode="coxeter")
        full = component_vectors(spec, d, sigma_mode="full")
        assert len(full) >= len(cox)
        assert span_equal([component(d).polynomial(v) for v in cox], [component(d).polynomial(v) for v in full], d)


def test_expand_families_lengths():
    fams = expand_families(get_spec("lemma32left"), 6)
    lengths = sorted(f.param for f in fams if f.tag == "CCk")
    assert lengths == [4, 5, 6]


def test_t32_is_t4_plus_i32_small():
    for d in compositions_up_to(5):
        assert lattices_equal(component_lattice("t32", d), union_lattice(["t4", "i32"], d))


def test_cor16_needs_a_third():
    d = MultiDegree.multilinear(5)
    assert lattices_equal(component_lattice("cor16", d, modulus=5), component_lattice("t4", d, modulus=5))
    assert not lattices_equal(component_lattice("cor16", d, modulus=3), component_lattice("t4", d, modulus=3))


def test_span_equal_rejects_mixed_degrees():
    with pytest.raises(ValueError):
        span_equal([x(1)], [x(2)], MultiDegree((1,)))


def test_mutation_hook_changes_spans():
    d = MultiDegree.multilinear(5)
    t4 = component_lattice("t4", d)
    with gen.corrupted("C32_1"):
        bad = component_lattice("thm13", d)
        assert not lattices_equal(bad, t4)
    assert lattices_equal(component_lattice("thm13", d), t4)


def test_caps():
    with pytest.raises(ValueError):
        gen.check_caps(MultiDegree.multilinear(9))
    with pytest.raises(ValueError):
        gen.check_caps(MultiDegree((1,) * 13), max_degree=20)
    with pytest.raises(ValueError):
        get_spec("nope")
