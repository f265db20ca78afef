from __future__ import annotations

import pytest

from lienil.freering import MultiDegree, Polynomial, bracket
from lienil.generators import component, component_lattice
from lienil.specht import CommutatorProduct
from lienil.torsion import (
    HQP,
    IDENTITIES,
    UndecidedMembership,
    alternating_difference,
    block_model,
    build_vk,
    canonical_relabel,
    check_order_in_quotient,
    enumerate_eset,
    identity_suite,
    is_member,
    lift_certificate,
    mu,
    q_generators_in_p,
    substitution_certificate,
    torsion_report,
    verify_ker_psi_equals_q,
    verify_mu,
    verify_thm11,
)

x = Polynomial.var


def test_vk_shape():
    v1 = build_vk(1)
    assert len(v1) == 8
    assert v1 == bracket(x(1), x(2)) * bracket(x(3), x(4), x(5))
    assert build_vk(2).multidegree() == MultiDegree.multilinear(7)
    with pytest.raises(ValueError):
        build_vk(0)
    with pytest.raises(ValueError):
        build_vk(5)


def test_order_examples():
    assert check_order_in_quotient(build_vk(1)).order == 3
    assert check_order_in_quotient(bracket(x(1), x(2), x(3), x(4))).order == 1
    assert check_order_in_quotient(x(1) * x(2)).label == "free"
    assert check_order_in_quotient(Polynomial.zero()).order == 1
    with pytest.raises(ValueError):
        check_order_in_quotient(x(1) + x(2))


def test_v1_membership_mod_3_and_over_z():
    v1 = build_vk(1)
    assert not is_member(v1, "t4")
    assert not is_member(v1, "t4", modulus=3)
    assert is_member(v1, "t4", modulus=5)  # 3 is invertible mod 5
    assert is_member(v1 * 3, "t4")


@pytest.mark.parametrize(
    "d, labels",
    [
        ((1, 1, 1, 1, 1), ["[x1,x2][x3,x4,x5]"]),
        ((1, 1, 1), []),
        ((2, 1, 1, 1, 1), ["x1*[x1,x2][x3,x4,x5]"]),
    ],
)
def test_eset_examples(d, labels):
    rep = torsion_report(MultiDegree(d))
    assert rep.e_labels == labels
    assert len(enumerate_eset(MultiDegree(d))) == len(labels)


def test_eset_p6_count():
    assert len(enumerate_eset(MultiDegree.multilinear(6))) == 6


@pytest.mark.parametrize("d, count", [((1, 1), 0), ((1, 1, 1, 1, 1), 1), ((2, 1, 1, 1, 1), 1), ((1, 1, 2, 1, 1), 1)])
def test_torsion_reports(d, count):
    rep = torsion_report(MultiDegree(d))
    assert rep.consistent
    assert rep.predicted_f3_dim == rep.observed_f3_dim == count
    assert rep.t4_snf.count(3) == count
    assert rep.extra_torsion == []


def test_block_model_matches_exact_mod_p():
    # at P_5 and P_6 both routes are available; they must agree
    for n in (5, 6):
        d = MultiDegree.multilinear(n)
        exact = component_lattice("t4", d, modulus=3)
        bm = block_model(d, 3)
        assert bm.rank == exact.rank
        comp = component(d)
        v = build_vk(1) if n == 5 else build_vk(1) * x(6)
        assert bm.contains(v) == exact.contains(comp.vector(v))


def test_lift_certificates():
    v2 = build_vk(2)
    cert = lift_certificate(v2, 3)
    assert cert is not None and cert["columns"] > 0
    assert lift_certificate(v2, 1) is None
    # v1 = [x1,x2] [x3,x4,x5] and no multiple of [x3,x4,x5] is in T(4)
    assert lift_certificate(build_vk(1), 3) is None
    assert lift_certificate(x(1) * x(2), 1) is None


def test_degree_seven_identity_instance():
    # [a1,a2,a3][a4,a5,a6] with a1 = x1 x2 lives in the (2,1,1,1,1,1) component (dimension 2520)
    args = [x(1) * x(2), x(1), x(3), x(4), x(5), x(6)]
    f = IDENTITIES["tripleTriple"][0]
    g = f(args)
    assert g.multidegree() == MultiDegree((2, 1, 1, 1, 1, 1))
    assert component(g.multidegree()).dim == 2520
    cert = substitution_certificate(f, 6, args)
    assert cert is not None
    # independent route: the block model mod 3 agrees
    assert block_model(g.multidegree(), 3).contains(g)


def test_large_component_membership_routes():
    # [x1,x2] q with q in T(4): lifted certificate
    assert is_member(bracket(x(1), x(2)) * bracket(x(3), x(4), x(5), x(6), x(7)), "t4")
    with pytest.raises(ValueError):
        is_member(bracket(x(1), x(2)) * x(3) * x(4) * x(5) * x(6) * x(7), "t2")
    assert issubclass(UndecidedMembership, ValueError)


def test_mu_basics():
    assert mu({(1, 2, 3, 4, 5): 1}) == 1
    assert mu({(2, 1, 3, 4, 5): 1}) == -1
    h = HQP(1)
    assert h.rank == 120
    assert h.word(h.identity_index()) == (1, 2, 3, 4, 5)
    idx, coef = h._three_cycles()
    assert set(h.mu(idx, coef).tolist()) == {3, -3}
    assert q_generators_in_p(h)


@pytest.mark.parametrize("k", [1, 2])
def test_verify_mu(k):
    r = verify_mu(k)
    assert r.passed
    assert r.witness["muIdentity"] == 1
    assert r.witness["allInThreeZ"] and r.witness["plusMinusThreeAttained"]


def test_ker_psi_k1():
    r = verify_ker_psi_equals_q(1)
    assert r.passed
    assert r.witness["rankHModQ"] == r.witness["cSetSize"] == 20


def test_thm11_k1_report():
    r = verify_thm11(1)
    assert r.passed
    assert r.witness["mod3RankWithTarget"] == r.witness["mod3Rank"] + 1
    assert r.witness["order"] == "3"


def test_alternation_and_relabel():
    letters = [x(i) for i in range(1, 6)]
    assert alternating_difference(letters, (1, 2, 3, 4, 5)) == Polynomial.zero()
    p = x(3) * x(5)
    assert canonical_relabel(p) == x(1) * x(2)


def test_identity_suite_small():
    r = identity_suite(seed=1, budget=6, instances=10)
    assert r.passed
    assert r.seed == 1
    assert r.witness["counts"]["alternation"]["letterOrbit"] == 120


def test_specht_product_in_t4_when_long():
    cp = CommutatorProduct.of((1, 2, 3, 4), (5, 6))
    assert is_member(cp.expand(), "t4")
