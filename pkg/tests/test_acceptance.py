"""Acceptance criteria 1-9.  Each test prints one PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) or through pytest.
All results are exact: the only tolerances are the runtime limits below.
"""

from __future__ import annotations

import random
import sys
import time
from typing import Callable, Dict, Tuple

import pytest

from lienil.freering import MultiDegree, Polynomial
from lienil.generators import component_lattice, compositions_up_to, lattices_equal, union_lattice
from lienil.specht import enumerate_specht_basis, prefix_gamma_decompose, reassemble
from lienil.torsion import (
    build_vk,
    identity_suite,
    listed_specht,
    torsion_report,
    verify_ker_psi_equals_q,
    verify_mu,
    verify_specht,
    verify_thm11,
)
from lienil.zmodule import SparseIntMatrix, det_bareiss, hnf_columns, matmul_dense, smith_normal_form

# runtime limits in seconds, one per criterion
LIMITS = {1: 10, 2: 600, 3: 300, 4: 600, 5: 180, 6: 60, 7: 60, 8: 300, 9: 120}

Outcome = Tuple[bool, str]


def criterion_1() -> Outcome:
    r = verify_thm11(1)
    w = r.witness
    ok = r.passed and w["dimension"] == 120 and w["order"] == "3" and w["orderRoute"] == "exact"
    return ok, f"P5 dim {w['dimension']}, mod-3 rank {w['mod3Rank']} -> {w['mod3RankWithTarget']} with v1, order {w['order']}"


def criterion_2() -> Outcome:
    r = verify_thm11(2)
    w = r.witness
    ok = r.passed and w["dimension"] == 5040 and w["order"] == "3" and w["threeVkCertificate"] is not None
    return ok, (
        f"P7 dim {w['dimension']}, mod-3 rank {w['mod3Rank']} -> {w['mod3RankWithTarget']} with v2, "
        f"3*v2 certified over {w['threeVkCertificate']['columns']} columns, order {w['order']} ({w['orderRoute']})"
    )


def criterion_3() -> Outcome:
    bad = []
    threes = {}
    for d in compositions_up_to(6):
        rep = torsion_report(d)
        divs = set(rep.t4_snf.divisors) - {0}
        ok = rep.consistent and divs <= {1, 3} and rep.t4_snf.count(3) == len(rep.e_labels)
        if not ok:
            bad.append(str(d))
        threes[str(d)] = rep.t4_snf.count(3)
    spot = threes["(1,1,1,1,1)"], threes["(1,1,1,1,1,1)"], threes["(2,1,1,1,1)"]
    ok = not bad and spot == (1, 6, 1)
    return ok, f"{len(threes)} multidegrees, threes at (1^5),(1^6),(2,1^4) = {spot}, failures {bad}"


def criterion_4() -> Outcome:
    bad = []
    ds = compositions_up_to(6)
    for d in ds:
        t4 = component_lattice("t4", d)
        order = t4.pivot_order()
        hnf = t4.canonical_basis(order)
        for name in ("thm13", "cor15", "lemma32left"):
            other = component_lattice(name, d)
            # canonical HNF bases must coincide; mutual containment is the second route
            if other.canonical_basis(order) != hnf or not lattices_equal(other, t4):
                bad.append(f"{name}@{d}")
        t32, rhs = component_lattice("t32", d), union_lattice(["t4", "i32"], d)
        order = t32.pivot_order()
        if t32.canonical_basis(order) != rhs.canonical_basis(order) or not lattices_equal(t32, rhs):
            bad.append(f"t32@{d}")
    return not bad, f"{len(ds)} multidegrees x 4 HNF equalities, failures {bad}"


def criterion_5() -> Outcome:
    bad = []
    ds = compositions_up_to(6)
    for p in (5, 7):
        for d in ds:
            if not lattices_equal(component_lattice("cor16", d, modulus=p), component_lattice("t4", d, modulus=p)):
                bad.append(f"F{p}@{d}")
    return not bad, f"{len(ds)} multidegrees over F5 and F7, failures {bad}"


def criterion_6() -> Outcome:
    listings = all(set(enumerate_specht_basis(n)) == set(listed_specht(n)) for n in (4, 5))
    r = verify_specht(6)
    counts = [row["size"] for row in r.witness]
    ranks = [row["gammaRank"] for row in r.witness]
    ok = listings and r.passed and counts == ranks == [1, 2, 9, 44, 265]
    return ok, f"listings n=4,5 match: {listings}; sizes {counts}; Gamma ranks {ranks}"


def criterion_7() -> Outcome:
    kp = verify_ker_psi_equals_q(1)
    w = kp.witness
    mus = [verify_mu(k) for k in (1, 2, 3)]
    m1 = mus[0].witness
    ok = (
        kp.passed
        and w["rankHModQ"] == w["cSetSize"] == 20
        and m1["muIdentity"] == 1
        and m1["allInThreeZ"]
        and m1["plusMinusThreeAttained"]
        and all(m.passed for m in mus)
    )
    return ok, (
        f"ker psi = Q: {w['kerPsiEqualsQ']}, rank H/Q {w['rankHModQ']}, |C| {w['cSetSize']}, "
        f"mu checks k=1,2,3: {[m.status for m in mus]}"
    )


def criterion_8() -> Outcome:
    r = identity_suite(seed=0, budget=6, instances=100)
    c = r.witness["counts"]
    ok = r.passed and all(c[k]["instances"] == 100 for k in ("swapThird", "swapSecond", "tripleTriple", "alternation"))
    ok = ok and c["alternation"]["letterOrbit"] == 120
    return ok, f"counts {c}, counterexamples {len(r.witness['counterexamples'])}"


def _random_poly(rng: random.Random, nvars: int = 3, maxlen: int = 3, terms: int = 4) -> Polynomial:
    out: Dict[Tuple[int, ...], int] = {}
    for _ in range(rng.randint(0, terms)):
        w = tuple(rng.randint(1, nvars) for _ in range(rng.randint(0, maxlen)))
        out[w] = out.get(w, 0) + rng.randint(-3, 3)
    return Polynomial(out)


def _random_matrix(rng: random.Random):
    r, c = rng.randint(1, 6), rng.randint(1, 6)
    return [[rng.randint(-5, 5) for _ in range(c)] for _ in range(r)]


def _random_unimodular(rng: random.Random, n: int):
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(2 * n):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        q = rng.randint(-2, 2)
        for row in u:
            row[i] += q * row[j]
    for _ in range(n // 2):  # a column swap and a sign flip
        i, j = rng.randrange(n), rng.randrange(n)
        for row in u:
            row[i], row[j] = row[j], row[i]
        for row in u:
            row[i] = -row[i]
    return u


def criterion_9(cases: int = 1000) -> Outcome:
    rng = random.Random(20260101)
    fails = {"ring": 0, "decomposition": 0, "hnf": 0, "snf": 0}
    one = Polynomial.one()
    for _ in range(cases):
        a, b, c = (_random_poly(rng) for _ in range(3))
        ok = (
            (a * b) * c == a * (b * c)
            and a * (b + c) == a * b + a * c
            and (a + b) * c == a * c + b * c
            and a + b == b + a
            and a * one == a == one * a
            and (a + b) - b == a
        )
        fails["ring"] += not ok
        p = _random_poly(rng, maxlen=4)
        fails["decomposition"] += reassemble(prefix_gamma_decompose(p)) != p
        m = _random_matrix(rng)
        u = _random_unimodular(rng, len(m[0]))
        same = hnf_columns(SparseIntMatrix.from_dense(m)) == hnf_columns(SparseIntMatrix.from_dense(matmul_dense(m, u)))
        fails["hnf"] += not same
        rep = smith_normal_form(SparseIntMatrix.from_dense(m), transforms=True)
        remult = matmul_dense(matmul_dense(rep.u, m), rep.v) == rep.diagonal
        unimod = abs(det_bareiss(rep.u)) == 1 and abs(det_bareiss(rep.v)) == 1
        fails["snf"] += not (remult and unimod and rep.chain_ok())
    return not any(fails.values()), f"{cases} cases each, failures {fails}"


CRITERIA: Dict[int, Callable[[], Outcome]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9,
}


def evaluate(n: int) -> Tuple[bool, str]:
    t0 = time.perf_counter()
    ok, detail = CRITERIA[n]()
    secs = time.perf_counter() - t0
    in_time = secs < LIMITS[n]
    status = "PASS" if ok and in_time else "FAIL"
    line = f"criterion {n}: {status} ({secs:.1f} s, limit {LIMITS[n]} s) {detail}"
    return ok and in_time, line


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, capsys):
    ok, line = evaluate(n)
    with capsys.disabled():
        sys.stdout.write("\n" + line + "\n")
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(n) for n in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
