"""Torsion of Z<X>/T(4): the elements v_k, the order-3 certificates, the
F_3-basis E of T(3,2)/T(4), the sign obstruction on the permutation module
H, and randomized checks of the classical T(4) congruences.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .freering import MultiDegree, Polynomial, Word, bracket, multiset_permutations
from .generators import (
    DEFAULT_MAX_DEGREE,
    GeneratorFamily,
    _compositions,
    check_caps,
    component,
    component_lattice,
    component_vectors,
    get_spec,
    instance_terms,
    perm_sign,
)
from .specht import (
    CommutatorProduct,
    enumerate_dset,
    enumerate_specht_basis,
    w_prime_generators,
    w_prime_specht,
    w_quotient_basis,
)
from .zmodule import DenseModP, Lattice, SnfReport, Vec, lattice_snf

EXACT_DIM_LIMIT = 720
DEFAULT_ORDER_BOUND = 9
# generating sets all spanning T(4)
T4_SPECS = ("t4", "thm13", "cor15", "lemma32left")


def build_vk(k: int, max_vars: int = 12) -> Polynomial:
    """v_k = [x1,x2]...[x(2k-1),x2k][x(2k+1),x(2k+2),x(2k+3)], expanded."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if 2 * k + 3 > max_vars:
        raise ValueError(f"v_{k} needs {2 * k + 3} variables, above the cap {max_vars}")
    return CommutatorProduct.c_index(tuple(range(1, 2 * k + 4))).expand()


@dataclass
class Report:
    """One check result, serialisable to the JSON report schema."""

    check: str
    parameters: Dict[str, object]
    status: str
    witness: object = None
    elapsed_ms: Optional[int] = None
    seed: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self, timing: bool = True) -> Dict[str, object]:
        return {
            "check": self.check,
            "parameters": self.parameters,
            "status": self.status,
            "witness": self.witness,
            "elapsedMs": self.elapsed_ms if timing else None,
            "seed": self.seed,
        }


class _Timer:
    def __enter__(self) -> "_Timer":
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc: object) -> None:
        self.ms = int(round((time.perf_counter() - self.t0) * 1000))


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


# ---------------------------------------------------------------------------
# membership and order


_TRACKED: Dict[Tuple[str, MultiDegree], Tuple[Lattice, List[Vec]]] = {}


def tracked_system(spec: str, d: MultiDegree) -> Tuple[Lattice, List[Vec]]:
    """Lattice of the component span that records generator coefficients."""
    name = get_spec(spec).name
    key = (name, d)
    entry = _TRACKED.get(key)
    if entry is None:
        gens = component_vectors(name, d)
        lat = Lattice(component(d).dim, track=True)
        lat.extend(gens)
        entry = (lat, gens)
        _TRACKED[key] = entry
    return entry


def _scaled(v: Vec, m: int) -> Vec:
    return {k: m * c for k, c in v.items()}


def is_member(p: Polynomial, spec: str = "t4", modulus: Optional[int] = None) -> bool:
    """Does p lie in the ideal (component by component)?

    Components above the exact limit need ``spec`` to be one of the
    generating sets of T(4).  Over F_p they are decided in the block model;
    over Z see :func:`_large_member`.
    """
    for d, comp in p.components().items():
        if component(d).dim > EXACT_DIM_LIMIT:
            if get_spec(spec).name not in T4_SPECS:
                raise ValueError(f"component {d} is too large for exact treatment of {spec!r}")
            if modulus is not None:
                ok = block_model(d, modulus).contains(comp)
            else:
                ok = _large_member(comp, spec)
            if not ok:
                return False
            continue
        lat = component_lattice(spec, d, modulus)
        if not lat.contains(component(d).vector(comp)):
            return False
    return True


class UndecidedMembership(ValueError):
    """Neither a certificate nor a modular obstruction was found."""


def _large_member(p: Polynomial, spec: str) -> bool:
    """Z-membership in a component above the exact limit.

    A lifted coefficient vector proves membership and a non-membership mod
    some small prime disproves it; anything else is reported as undecided.
    """
    if lift_certificate(p, 1, spec) is not None:
        return True
    d = p.multidegree()
    for q in (3, 2, 5, 7):
        if not block_model(d, q).contains(p):
            return False
    raise UndecidedMembership(f"membership in component {d} is undecided")


@dataclass
class OrderResult:
    order: Optional[int]  # None means the image has infinite order
    route: str
    details: Dict[str, object] = field(default_factory=dict)

    @property
    def label(self) -> str:
        return "free" if self.order is None else str(self.order)


def check_order_in_quotient(
    p: Polynomial, spec: str = "t4", bound: int = DEFAULT_ORDER_BOUND, max_degree: int = DEFAULT_MAX_DEGREE
) -> OrderResult:
    """Additive order of the image of p in Z<X>/I.

    Components of dimension <= 720 are decided exactly: m = 1..bound are
    tried and then the exponent of the torsion subgroup settles the rest.
    Larger multilinear components of T(4) (P_7) use certificates: a mod-q
    non-membership rules out every m prime to q, and a coefficient vector
    over an explicit list of ideal elements proves m*p is in the ideal.
    """
    if not p:
        return OrderResult(1, "zero")
    d = p.multidegree()  # raises for non-multihomogeneous input
    check_caps(d, max_degree)
    comp = component(d)
    vec = comp.vector(p)
    if comp.dim <= EXACT_DIM_LIMIT:
        lat = component_lattice(spec, d)
        for m in range(1, bound + 1):
            if lat.contains(_scaled(vec, m)):
                return OrderResult(m, "exact", {"searched": m})
        ds = lat.elementary_divisors()
        e = max(ds) if ds else 1
        if not lat.contains(_scaled(vec, e)):
            return OrderResult(None, "exact", {"torsionExponent": e})
        m = min(m for m in range(1, e + 1) if e % m == 0 and lat.contains(_scaled(vec, m)))
        return OrderResult(m, "exact", {"torsionExponent": e})
    return _order_by_certificates(p, spec, bound)


def _order_by_certificates(p: Polynomial, spec: str, bound: int) -> OrderResult:
    name = get_spec(spec).name
    d = p.multidegree()
    if name not in T4_SPECS or not d.is_multilinear():
        raise ValueError(f"component {d} is too large for exact treatment of {spec!r}")
    nonmember: Dict[int, bool] = {}

    def excluded(m: int, compute: bool) -> bool:
        # m*p in I with q not dividing m would put p in I mod q
        for q in (3, 2, 5, 7):
            if m % q == 0:
                continue
            if q not in nonmember:
                if not compute:
                    continue
                nonmember[q] = not block_model(d, q).contains(p)
            if nonmember[q]:
                return True
        return False

    details: Dict[str, object] = {}
    for m in range(1, bound + 1):
        if excluded(m, compute=m == 1):
            continue
        cert = lift_certificate(p, m, name)
        if cert is not None:
            details["modPNonMember"] = sorted(q for q, x in nonmember.items() if x)
            details["liftColumns"] = cert["columns"]
            details["multiple"] = m
            return OrderResult(m, "certificate", details)
        if not excluded(m, compute=True):
            # neither ruled out nor certified: smaller orders stay open
            details["undecidedMultiple"] = m
            break
    details["modPNonMember"] = sorted(q for q, x in nonmember.items() if x)
    return OrderResult(-1, "undetermined", details)


def _split_left_commutator(p: Polynomial) -> Optional[Tuple[int, int, Polynomial]]:
    """Write p = [x_a, x_b] * q with a < b if possible."""
    items = list(p.terms.items())
    if not items or len(items[0][0]) < 2:
        return None
    w0 = items[0][0]
    a, b = sorted(w0[:2])
    if a == b:
        return None
    q_terms: Dict[Word, int] = {}
    for w, c in items:
        if set(w[:2]) != {a, b} or w[0] == w[1]:
            return None
        if w[:2] == (a, b):
            q_terms[w[2:]] = c
    q = Polynomial(q_terms)
    if bracket(Polynomial.var(a), Polynomial.var(b)) * q != p:
        return None
    return a, b, q


def lift_certificate(p: Polynomial, m: int, spec: str = "t4") -> Optional[Dict[str, object]]:
    """Prove m*p is in the ideal when p = [x_a,x_b] q and m*q is an exact
    combination of generators g_j of q's component: the elements x_a x_b g_j
    and x_b x_a g_j are ideal elements, and the Z-solver is run against that
    column list.  Returns None when no certificate is found."""
    split = _split_left_commutator(p)
    if split is None:
        return None
    a, b, q = split
    dq = q.multidegree()
    if component(dq).dim > EXACT_DIM_LIMIT:
        return None
    lat, gens = tracked_system(spec, dq)
    sol = lat.solve(component(dq).vector(q * m))
    if sol is None:
        return None
    cq = component(dq)
    d = p.multidegree()
    comp = component(d)
    cols: List[Vec] = []
    for j in sorted(j for j, c in sol.items() if c):
        g = cq.polynomial(gens[j])
        for pre in ((a, b), (b, a)):
            cols.append(comp.vector(Polynomial.monomial(pre) * g))
    target = comp.vector(p * m)
    pruned = Lattice(comp.dim, track=True)
    pruned.extend(cols)
    coef = pruned.solve(target)
    if coef is None:
        return None
    acc: Dict[int, int] = {}
    for j, c in coef.items():
        for k, x in cols[j].items():
            acc[k] = acc.get(k, 0) + c * x
    if {k: x for k, x in acc.items() if x} != target:  # pragma: no cover - solver soundness
        raise AssertionError("lifted certificate does not reproduce the target")
    return {"columns": len(cols), "coefficients": {str(j): c for j, c in sorted(coef.items()) if c}}


class BlockModel:
    """F_p model of a large component Z<X>_d / (T(4) within it).

    The left ideal form a0 [a1,a2,a3,a4] with monomial slots spans the same
    component as the two-sided form.  Splitting off the first letter x_j of
    a0 gives x_j * (T(4) within the component d - e_j), which lives in the
    coordinates of words starting with x_j.  Modulo those blocks only the
    products with empty a0 remain, and their residues are echelonized
    densely.
    """

    def __init__(self, d: MultiDegree, modulus: int) -> None:
        import numpy as np

        self.d, self.modulus = d, modulus
        comp = component(d)
        self.comp = comp
        counts = d.as_dict()
        offsets: Dict[int, Tuple[int, int]] = {}
        sub_res: Dict[int, object] = {}
        width = 0
        self.unit_rank = 0
        for j in sorted(counts):
            rest = dict(counts)
            rest[j] -= 1
            dj = MultiDegree.from_dict(rest)
            cj = component(dj)
            if cj.dim > EXACT_DIM_LIMIT:
                raise ValueError(f"block {dj} is too large for the block model")
            sub = component_lattice("t4", dj, modulus=modulus)
            unit = sub._unit
            free = [i for i in range(cj.dim) if i not in unit]
            pos = {c: i for i, c in enumerate(free)}
            res = np.zeros((cj.dim, len(free)), dtype=np.int64)
            for i in range(cj.dim):
                if i in unit:
                    for c, x in unit[i].items():
                        if c != i:
                            res[i, pos[c]] = -x
                else:
                    res[i, pos[i]] = 1
            offsets[j] = (width, len(free))
            sub_res[j] = (cj, res)
            width += len(free)
            self.unit_rank += len(unit)
        self.width = width
        table = np.zeros((comp.dim, width), dtype=np.int64)
        for wi, w in enumerate(comp.words):
            off, size = offsets[w[0]]
            cj, res = sub_res[w[0]]
            table[wi, off:off + size] = res[cj.index[w[1:]]]
        table %= modulus
        self.ech = DenseModP(width, modulus)
        self.residue_of_word = table
        fam = GeneratorFamily("TnDEF", 4)
        n = d.total
        idx_rows, coef_rows = [], []
        for word in multiset_permutations(d.letters()):
            for sizes in _compositions(n, 4, False, False):
                cuts = [0]
                for s in sizes:
                    cuts.append(cuts[-1] + s)
                g = instance_terms(fam, [word[cuts[i]:cuts[i + 1]] for i in range(4)])
                if not g:
                    continue
                items = sorted(g.items())
                idx_rows.append([comp.index[w] for w, _ in items] + [0] * (16 - len(items)))
                coef_rows.append([c for _, c in items] + [0] * (16 - len(items)))
        idx = np.array(idx_rows)
        coef = np.array(coef_rows)
        step = max(200, 20_000_000 // (16 * max(width, 1)))
        for s in range(0, len(idx), step):
            rows = np.einsum("nt,ntb->nb", coef[s:s + step], table[idx[s:s + step]]) % modulus
            self.ech.add_rows(rows[rows.any(axis=1)])

    @property
    def rank(self) -> int:
        """F_p-rank of the whole component span."""
        return self.unit_rank + self.ech.rank

    def residue(self, p: Polynomial):
        import numpy as np

        out = np.zeros(self.width, dtype=np.int64)
        for w, c in p.terms.items():
            out += c * self.residue_of_word[self.comp.index[w]]
        return out % self.modulus

    def contains(self, p: Polynomial) -> bool:
        return self.ech.contains(self.residue(p))


_BLOCKS: Dict[Tuple[MultiDegree, int], BlockModel] = {}


def block_model(d: MultiDegree, modulus: int) -> BlockModel:
    key = (d, modulus)
    if key not in _BLOCKS:
        _BLOCKS[key] = BlockModel(d, modulus)
    return _BLOCKS[key]


def verify_thm11(k: int) -> Report:
    """v_k is not in T(4) mod 3, 3 v_k is in T(4) over Z, order exactly 3."""
    with _Timer() as t:
        v = build_vk(k)
        d = v.multidegree()
        comp = component(d)
        w: Dict[str, object] = {"multidegree": str(d), "dimension": comp.dim}
        if comp.dim <= EXACT_DIM_LIMIT:
            lat3 = component_lattice("t4", d, modulus=3)
            r = lat3.rank
            member3 = lat3.contains(comp.vector(v))
            w["mod3Rank"] = r
            w["mod3RankWithTarget"] = r if member3 else r + 1
            lat, gens = tracked_system("t4", d)
            sol = lat.solve(comp.vector(v * 3))
            w["threeVkCoefficients"] = None if sol is None else {str(j): c for j, c in sorted(sol.items()) if c}
            ok_pos = sol is not None
            if sol is not None:
                acc: Dict[int, int] = {}
                for j, c in sol.items():
                    for i, x in gens[j].items():
                        acc[i] = acc.get(i, 0) + c * x
                ok_pos = {i: x for i, x in acc.items() if x} == comp.vector(v * 3)
        else:
            bq = block_model(d, 3)
            member3 = bq.contains(v)
            w["mod3Rank"] = bq.rank
            w["mod3RankWithTarget"] = bq.rank if member3 else bq.rank + 1
            cert = lift_certificate(v, 3)
            ok_pos = cert is not None
            w["threeVkCertificate"] = cert
        order = check_order_in_quotient(v, "t4")
        w["order"] = order.label
        w["orderRoute"] = order.route
        ok = (not member3) and ok_pos and order.order == 3
    return Report("thm11", {"k": k}, _status(ok), w, t.ms)


# ---------------------------------------------------------------------------
# the set E and torsion reports


def enumerate_eset(d: MultiDegree) -> List[Polynomial]:
    """Elements x_j1...x_jl [x_i1,x_i2]...[x_i(2k+1),x_i(2k+2),x_i(2k+3)] of
    multidegree d with j1 <= ... <= jl, i1 < ... < i(2k+3), k >= 1."""
    return [cp for _, cp in _eset_labels(d)]


def _eset_labels(d: MultiDegree) -> List[Tuple[str, Polynomial]]:
    counts = d.as_dict()
    support = sorted(counts)
    out = []
    for size in range(5, len(support) + 1, 2):
        for s in itertools.combinations(support, size):
            rest = dict(counts)
            for v in s:
                rest[v] -= 1
            prefix = tuple(v for v in sorted(rest) for _ in range(rest[v]))
            cp = CommutatorProduct.c_index(s)
            pre = "".join(f"x{v}*" for v in prefix)
            out.append((pre + str(cp), Polynomial.monomial(prefix) * cp.expand()))
    return out


@dataclass
class TorsionReport:
    multidegree: MultiDegree
    ambient_rank: int
    t4_snf: SnfReport
    predicted_f3_dim: int
    observed_f3_dim: int
    extra_torsion: List[int]
    e_in_t32: bool
    e_independent_f3: bool
    e_labels: List[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return (
            not self.extra_torsion
            and self.predicted_f3_dim == self.observed_f3_dim
            and self.e_in_t32
            and self.e_independent_f3
            and self.t4_snf.count(3) == self.observed_f3_dim
        )

    def to_dict(self) -> Dict[str, object]:
        return {
            "multidegree": str(self.multidegree),
            "ambientRank": self.ambient_rank,
            "t4Snf": self.t4_snf.to_dict(),
            "predictedF3Dim": self.predicted_f3_dim,
            "observedF3Dim": self.observed_f3_dim,
            "extraTorsion": self.extra_torsion,
            "eInT32": self.e_in_t32,
            "eIndependentModT4": self.e_independent_f3,
            "e": self.e_labels,
        }


def torsion_report(d: MultiDegree, max_degree: int = DEFAULT_MAX_DEGREE) -> TorsionReport:
    check_caps(d, max_degree)
    comp = component(d)
    lat = component_lattice("t4", d)
    snf = lattice_snf(lat)
    labelled = _eset_labels(d)
    es = [e for _, e in labelled]
    t32 = component_lattice("t32", d)
    in_t32 = all(t32.contains(comp.vector(e)) for e in es)
    lat3 = component_lattice("t4", d, modulus=3)
    ext = Lattice(comp.dim, 3)
    ext.extend(lat3.basis())
    ext.extend(comp.vector(e) for e in es)
    independent = ext.rank - lat3.rank == len(es)
    observed = snf.count(3)
    extra = sorted(x for x in snf.torsion if x != 3)
    return TorsionReport(d, comp.dim, snf, len(es), observed, extra, in_t32, independent, [s for s, _ in labelled])


# ---------------------------------------------------------------------------
# the permutation module H and the subgroups Q, P


class HQP:
    """H = free abelian group on h_w, w a permutation word of 1..2k+3,
    indexed by the lexicographic rank of w."""

    def __init__(self, k: int, budget: int = 40320) -> None:
        import numpy as np

        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k
        self.n = n = 2 * k + 3
        self.np = np
        self.perms = np.array(list(itertools.permutations(range(1, n + 1))), dtype=np.int64)
        if len(self.perms) > 10 ** 6:  # pragma: no cover
            raise ValueError("H too large")
        self.full = len(self.perms) <= budget
        self._weights = n ** np.arange(n - 1, -1, -1)
        self._rank = np.full(n ** n, -1, dtype=np.int64) if n <= 7 else None
        keys = (self.perms - 1) @ self._weights
        if self._rank is not None:
            self._rank[keys] = np.arange(len(self.perms))
        else:
            self._order = np.argsort(keys)
            self._sorted_keys = keys[self._order]
        self.signs = np.array([perm_sign(p) for p in self.perms.tolist()], dtype=np.int64)

    @property
    def rank(self) -> int:
        return len(self.perms)

    def index_of(self, words) -> "object":
        """Row ranks of an array of permutation words."""
        np = self.np
        keys = (np.asarray(words) - 1) @ self._weights
        if self._rank is not None:
            r = self._rank[keys]
        else:
            r = self._order[np.searchsorted(self._sorted_keys, keys)]
        return r

    def word(self, i: int) -> Tuple[int, ...]:
        return tuple(int(x) for x in self.perms[i])

    def identity_index(self) -> int:
        return 0

    # generators are returned as (indices, coefficients) arrays, one row each

    def _position_perm(self, sigma: Sequence[int]):
        """Index arrays for h_w -> h_{w o sigma} (w_{sigma(1)} ... w_{sigma(n)})."""
        np = self.np
        cols = np.asarray(sigma, dtype=np.int64) - 1
        return self.index_of(self.perms[:, cols])

    def q_generators(self) -> List[Tuple[object, object]]:
        np = self.np
        k, n = self.k, self.n
        base = np.arange(self.rank)
        out = []
        for l in range(1, k + 2):  # swap positions 2l-1, 2l
            s = list(range(1, n + 1))
            s[2 * l - 2], s[2 * l - 1] = s[2 * l - 1], s[2 * l - 2]
            out.append((np.stack([base, self._position_perm(s)], 1), np.array([1, 1])))
        for l in range(2, k + 1):  # swap the pairs l-1 and l
            s = list(range(1, n + 1))
            a, b = 2 * l - 4, 2 * l - 2
            s[a], s[a + 1], s[b], s[b + 1] = s[b], s[b + 1], s[a], s[a + 1]
            out.append((np.stack([base, self._position_perm(s)], 1), np.array([1, -1])))
        out.append(self._three_cycles())
        return out

    def _three_cycles(self):
        np = self.np
        n = self.n
        s1 = list(range(1, n - 2)) + [n - 1, n, n - 2]
        s2 = list(range(1, n - 2)) + [n, n - 2, n - 1]
        base = np.arange(self.rank)
        return (np.stack([base, self._position_perm(s1), self._position_perm(s2)], 1), np.array([1, 1, 1]))

    def p_sigmas(self) -> Iterator[Tuple[int, ...]]:
        """Permutations used for the signed-difference generators: all of
        S_n when H is small enough, adjacent transpositions otherwise (the
        span is the same, by the telescoping identity for signed
        differences)."""
        n = self.n
        ident = tuple(range(1, n + 1))
        if self.full:
            for s in itertools.permutations(ident):
                if s != ident:
                    yield s
        else:
            for i in range(n - 1):
                s = list(ident)
                s[i], s[i + 1] = s[i + 1], s[i]
                yield tuple(s)

    def p_generators(self) -> Iterator[Tuple[object, object]]:
        np = self.np
        base = np.arange(self.rank)
        for s in self.p_sigmas():
            yield (np.stack([base, self._position_perm(s)], 1), np.array([1, -perm_sign(s)]))
        yield self._three_cycles()

    def mu(self, idx, coef):
        """mu applied row-wise to generator arrays."""
        np = self.np
        return (self.signs[np.asarray(idx)] * np.asarray(coef)).sum(axis=-1)

    def to_vectors(self, gens) -> List[Vec]:
        out = []
        for idx, coef in gens:
            for row in idx.tolist():
                v: Dict[int, int] = {}
                for i, c in zip(row, coef.tolist()):
                    v[i] = v.get(i, 0) + c
                v = {i: c for i, c in v.items() if c}
                if v:
                    out.append(v)
        return out


def build_hqp(k: int) -> HQP:
    return HQP(k)


def mu(e: Dict[Tuple[int, ...], int]) -> int:
    """Sign homomorphism H -> Z on an element given as {index word: coef}."""
    return sum(c * perm_sign(w) for w, c in e.items())


def q_generators_in_p(h: HQP) -> bool:
    """Each Q generator is literally a P generator: either the 3-cycle sum or
    h_w - sgn(s) h_{w o s} for the position permutation s it encodes."""
    np = h.np
    for idx, coef in h.q_generators():
        if idx.shape[1] == 3:
            continue
        w = h.perms[idx[:, 0]]
        u = h.perms[idx[:, 1]]
        # recover s with u = w o s: s = w^{-1} o u
        inv = np.argsort(w, axis=1)
        s = np.take_along_axis(inv, u - 1, axis=1) + 1
        s0 = tuple(int(x) for x in s[0])
        if not (s == np.array(s0)).all() or int(coef[1]) != -perm_sign(s0):
            return False
    return True


def verify_mu(k: int) -> Report:
    """mu(h_id) = 1 while mu maps every P generator into 3Z, hitting +-3."""
    with _Timer() as t:
        h = HQP(k)
        mu_id = int(h.signs[h.identity_index()])
        hits3 = False
        all_in_3z = True
        count = 0
        for idx, coef in h.p_generators():
            vals = h.mu(idx, coef)
            count += len(vals)
            all_in_3z &= bool((vals % 3 == 0).all())
            hits3 |= bool((abs(vals) == 3).any())
        q_ok = q_generators_in_p(h)
        ok = mu_id == 1 and all_in_3z and hits3 and q_ok
        w = {
            "rankH": h.rank,
            "muIdentity": mu_id,
            "pGeneratorsChecked": count,
            "sigmaMode": "full" if h.full else "adjacent-transpositions",
            "allInThreeZ": all_in_3z,
            "plusMinusThreeAttained": hits3,
            "qSubsetOfP": q_ok,
        }
    return Report("mu", {"k": k}, _status(ok), w, t.ms)


# ---------------------------------------------------------------------------
# psi: H -> W/W' at k = 1


def _span_lattice(vectors: Sequence[Vec], dim: int) -> Lattice:
    lat = Lattice(dim)
    lat.extend(vectors)
    return lat


def _equal(a: Lattice, b: Lattice) -> bool:
    return a.rank == b.rank and a.contains_lattice(b) and b.contains_lattice(a)


def verify_ker_psi_equals_q(k: int = 1, extra: bool = True) -> Report:
    """Build psi in Specht coordinates, compute its kernel and compare with Q."""
    if k != 1:
        raise ValueError("the kernel computation is only supported for k = 1")
    with _Timer() as t:
        n = 2 * k + 3
        d = MultiDegree.multilinear(n)
        comp = component(d)
        specht = enumerate_specht_basis(n)
        sbasis = Lattice(comp.dim, track=True)
        sbasis.extend(comp.vector(cp.terms()) for cp in specht)
        specht_independent = sbasis.rank == len(specht) and not sbasis.kernel_combos()
        # W' from its defining products, against the Specht-filtered basis
        wp_def = _span_lattice([comp.vector(cp.terms()) for cp in w_prime_generators(n)], comp.dim)
        wp_sp = _span_lattice([comp.vector(cp.terms()) for cp in w_prime_specht(n)], comp.dim)
        wprime_ok = _equal(wp_def, wp_sp)
        t4 = component_lattice("t4", d)
        wprime_in_t4 = t4.contains_lattice(wp_def)
        quotient = w_quotient_basis(n)
        qpos = {specht.index(cp): i for i, cp in enumerate(quotient)}
        h = HQP(k)
        images: List[Vec] = []
        for i in range(h.rank):
            cw = CommutatorProduct.c_index(h.word(i))
            coords = sbasis.solve(comp.vector(cw.terms()))
            assert coords is not None
            images.append({qpos[j]: c for j, c in coords.items() if c and j in qpos})
        psi = Lattice(len(quotient), track=True)
        psi.extend(images)
        kernel = _span_lattice(psi.kernel_combos(), h.rank)
        qlat = _span_lattice(h.to_vectors(h.q_generators()), h.rank)
        ker_eq_q = _equal(kernel, qlat)
        q_snf = lattice_snf(qlat)
        quotient_rank = h.rank - qlat.rank
        h_mod_q_free = not q_snf.torsion
        dset = enumerate_dset(k)
        targets = sorted((qpos[specht.index(CommutatorProduct.c_index(w))]) for w in dset)
        d_images = [images[int(h.index_of([list(w)])[0])] for w in dset]
        bijective = (
            all(len(v) == 1 and list(v.values())[0] == 1 for v in d_images)
            and sorted(next(iter(v)) for v in d_images) == list(range(len(quotient)))
            and targets == list(range(len(quotient)))
        )
        w: Dict[str, object] = {
            "rankH": h.rank,
            "spechtIndependent": specht_independent,
            "wPrimeDefinitionMatchesSpecht": wprime_ok,
            "wPrimeInT4": wprime_in_t4,
            "quotientBasis": len(quotient),
            "rankHModQ": quotient_rank,
            "hModQTorsionFree": h_mod_q_free,
            "cSetSize": len(dset),
            "kerPsiEqualsQ": ker_eq_q,
            "psiOfDIsCBasis": bijective,
        }
        ok = (
            specht_independent and wprime_ok and wprime_in_t4 and ker_eq_q and h_mod_q_free
            and quotient_rank == len(dset) == len(quotient) and bijective
        )
        if extra:
            w["preimageEqualsP"] = preimage_equals_p(h, comp)
    return Report("kerpsi", {"k": k}, _status(ok), w, t.ms)


def preimage_equals_p(h: HQP, comp) -> bool:
    """psi^{-1}((P_5 within Gamma(4)) / W') = P, computed as the set of h with
    sum h_w c_w in the T(4) component."""
    d = comp.degree
    t4 = component_lattice("t4", d)
    lat = Lattice(comp.dim, track=True)
    for i in range(h.rank):
        lat.add(comp.vector(CommutatorProduct.c_index(h.word(i)).terms()))
    lat.extend(t4.basis())
    pre = [{j: c for j, c in rel.items() if j < h.rank and c} for rel in lat.kernel_combos()]
    pre_lat = _span_lattice([v for v in pre if v], h.rank)
    p_lat = _span_lattice(h.to_vectors(h.p_generators()), h.rank)
    return _equal(pre_lat, p_lat)


# ---------------------------------------------------------------------------
# randomized identities


def _swap_third(a: Sequence[Polynomial]) -> Polynomial:
    return bracket(a[0], a[1], a[2]) * bracket(a[3], a[4]) + bracket(a[0], a[1], a[3]) * bracket(a[2], a[4])


def _swap_second(a: Sequence[Polynomial]) -> Polynomial:
    return bracket(a[0], a[1], a[2]) * bracket(a[3], a[4]) + bracket(a[0], a[3], a[2]) * bracket(a[1], a[4])


def _triple_triple(a: Sequence[Polynomial]) -> Polynomial:
    return bracket(a[0], a[1], a[2]) * bracket(a[3], a[4], a[5])


def _cube(a: Sequence[Polynomial]) -> Polynomial:
    return bracket(a[0], a[1]) * bracket(a[2], a[3], a[4])


def alternating_difference(a: Sequence[Polynomial], sigma: Sequence[int]) -> Polynomial:
    """[a1,a2][a3,a4,a5] - sgn(s) [a_s1,a_s2][a_s3,a_s4,a_s5]."""
    return _cube(a) - perm_sign(sigma) * _cube([a[i - 1] for i in sigma])


IDENTITIES = {"swapThird": (_swap_third, 5), "swapSecond": (_swap_second, 5), "tripleTriple": (_triple_triple, 6)}


def canonical_relabel(p: Polynomial) -> Polynomial:
    """Rename variables in order of first appearance in the smallest word,
    so that equivalent instances share a cached component lattice."""
    order: Dict[int, int] = {}
    for w, _ in p.items():
        for v in w:
            if v not in order:
                order[v] = len(order) + 1
    return p.relabel(order)


def _random_monomials(rng: random.Random, count: int, budget: int, nvars: int) -> List[Polynomial]:
    total = rng.randint(count, max(count, budget))
    lengths = [1] * count
    for _ in range(total - count):
        lengths[rng.randrange(count)] += 1
    return [Polynomial.monomial([rng.randint(1, nvars) for _ in range(L)]) for L in lengths]


def substitution_certificate(
    f: Callable[[Sequence[Polynomial]], Polynomial], arity: int, args: Sequence[Polynomial]
) -> Optional[Dict[str, object]]:
    """Prove f(args) is in T(4) from the multilinear form f(x1, ..., x_arity).

    The generic form is solved exactly against the generators of its
    component.  A substitution of polynomials for letters maps every
    generator to a sum of generators (T(4) is closed under endomorphisms),
    so the substituted combination is a certificate for f(args); it is
    re-expanded and compared with f(args).
    """
    d = MultiDegree.multilinear(arity)
    generic = f([Polynomial.var(i) for i in range(1, arity + 1)])
    comp = component(d)
    lat, gens = tracked_system("t4", d)
    sol = lat.solve(comp.vector(generic))
    if sol is None:
        return None
    assignment = {i: args[i - 1] for i in range(1, arity + 1)}
    image = Polynomial.zero()
    used = 0
    for j, c in sorted(sol.items()):
        if c:
            image = image + comp.polynomial(gens[j]).substitute(assignment) * c
            used += 1
    if image != f(args):  # pragma: no cover - substitution is a ring map
        raise AssertionError("substituted certificate does not reproduce the instance")
    return {"genericDegree": arity, "generators": used}


def _member_t4(p: Polynomial, f=None, arity: int = 0, args: Sequence[Polynomial] = ()) -> bool:
    if not p:
        return True
    d = p.multidegree()
    if component(d).dim > EXACT_DIM_LIMIT and f is not None:
        return substitution_certificate(f, arity, args) is not None
    return is_member(canonical_relabel(p), "t4")


def identity_suite(seed: int = 0, budget: int = 6, instances: int = 100, nvars: int = 8) -> Report:
    """Sample monomial substitutions and check each identity instance lies in
    the T(4) component span; the signed alternation is checked on all of S5
    at letters and on sampled permutations at monomials."""
    with _Timer() as t:
        rng = random.Random(seed)
        counts: Dict[str, Dict[str, int]] = {}
        failures: List[Dict[str, object]] = []
        for name, (f, arity) in IDENTITIES.items():
            zero = 0
            for _ in range(instances):
                a = _random_monomials(rng, arity, budget, nvars)
                g = f(a)
                zero += not g
                if not _member_t4(g, f, arity, a):
                    failures.append({"identity": name, "arguments": [str(x) for x in a]})
            counts[name] = {"instances": instances, "zero": zero}
        letters = [Polynomial.var(i) for i in range(1, 6)]
        s5 = list(itertools.permutations(range(1, 6)))
        orbit_ok = 0
        for s in s5:
            if _member_t4(alternating_difference(letters, s)):
                orbit_ok += 1
            else:
                failures.append({"identity": "alternation", "sigma": list(s), "arguments": "letters"})
        zero = 0
        for _ in range(instances):
            a = _random_monomials(rng, 5, budget, nvars)
            s = rng.choice(s5)
            g = alternating_difference(a, s)
            zero += not g
            if not _member_t4(g, lambda b, s=s: alternating_difference(b, s), 5, a):
                failures.append({"identity": "alternation", "sigma": list(s), "arguments": [str(x) for x in a]})
        counts["alternation"] = {"instances": instances, "zero": zero, "letterOrbit": orbit_ok}
        w = {"counts": counts, "counterexamples": failures}
    return Report("identities", {"budget": budget, "instances": instances}, _status(not failures), w, t.ms, seed)


# ---------------------------------------------------------------------------
# Specht basis checks


def listed_specht(n: int) -> List[CommutatorProduct]:
    """The explicit descriptions of the Specht basis for n = 4 and n = 5 by
    factor shape, built independently of the general enumeration."""
    out: List[CommutatorProduct] = []
    if n == 4:
        for p in itertools.permutations((1, 2, 3)):
            out.append(CommutatorProduct.of((4,) + p))
        for i1, i2, i3 in itertools.permutations((1, 2, 3)):
            if i1 > i2:
                out.append(CommutatorProduct.of((i1, i2), (4, i3)))
        return out
    if n == 5:
        for p in itertools.permutations((1, 2, 3, 4)):
            out.append(CommutatorProduct.of((5,) + p))
        for i1, i2, i3, i4 in itertools.permutations((1, 2, 3, 4)):
            if i2 > i3 and i2 > i4:
                out.append(CommutatorProduct.of((5, i1), (i2, i3, i4)))
            if i1 > i2:
                out.append(CommutatorProduct.of((i1, i2), (5, i3, i4)))
        return out
    raise ValueError("explicit listings exist for n = 4 and n = 5 only")


def gamma_rank(n: int) -> int:
    """Rank of the multilinear Gamma component, from its spanning set P."""
    from .specht import gamma_component_span

    d = MultiDegree.multilinear(n)
    comp = component(d)
    lat = Lattice(comp.dim)
    lat.extend(comp.vector(cp.terms()) for cp in gamma_component_span(d))
    return lat.rank


def verify_specht(n_max: int = 6) -> Report:
    from .specht import derangements

    with _Timer() as t:
        rows = []
        ok = True
        for n in range(2, n_max + 1):
            basis = enumerate_specht_basis(n)
            d = MultiDegree.multilinear(n)
            comp = component(d)
            lat = Lattice(comp.dim)
            lat.extend(comp.vector(cp.terms()) for cp in basis)
            independent = lat.rank == len(basis) and set(lattice_snf(lat).divisors) <= {1}
            g = Lattice(comp.dim)
            from .specht import gamma_component_span

            g.extend(comp.vector(cp.terms()) for cp in gamma_component_span(d))
            spans = _equal(lat, g)
            row = {
                "n": n,
                "size": len(basis),
                "gammaRank": g.rank,
                "derangements": derangements(n),
                "independent": independent,
                "spansGamma": spans,
            }
            good = independent and spans and len(basis) == g.rank == derangements(n)
            if n in (4, 5):
                row["matchesListing"] = set(basis) == set(listed_specht(n)) and len(basis) == len(listed_specht(n))
                good = good and row["matchesListing"]
            ok = ok and good
            rows.append(row)
    return Report("specht", {"n": n_max}, _status(ok), rows, t.ms)


# ---------------------------------------------------------------------------
# span equivalences as reports


def verify_span_equalities(checks: Sequence[Tuple[str, Sequence[str], Sequence[str]]], max_total: int,
                           modulus: Optional[int] = None, name: str = "spans") -> Report:
    """Each check compares the union of ``lhs`` spans with the union of
    ``rhs`` spans at every multidegree of total degree <= max_total."""
    from .generators import compositions_up_to, lattices_equal, union_lattice

    with _Timer() as t:
        failures = []
        count = 0
        for d in compositions_up_to(max_total):
            for label, lhs, rhs in checks:
                count += 1
                if not lattices_equal(union_lattice(lhs, d, modulus), union_lattice(rhs, d, modulus)):
                    failures.append({"check": label, "multidegree": str(d)})
        w = {"comparisons": count, "failures": failures, "multidegrees": len(compositions_up_to(max_total))}
        params: Dict[str, object] = {"maxTotalDegree": max_total}
        if modulus is not None:
            params["prime"] = modulus
    return Report(name, params, _status(not failures), w, t.ms)


def verify_thm12(max_total: int = 6) -> Report:
    from .generators import compositions_up_to

    with _Timer() as t:
        rows = []
        ok = True
        for d in compositions_up_to(max_total):
            tr = torsion_report(d)
            ok = ok and tr.consistent
            rows.append({
                "multidegree": str(d),
                "predicted": tr.predicted_f3_dim,
                "observed": tr.observed_f3_dim,
                "extraTorsion": tr.extra_torsion,
                "eInT32": tr.e_in_t32,
                "eIndependent": tr.e_independent_f3,
            })
    return Report("thm12", {"maxTotalDegree": max_total}, _status(ok), rows, t.ms)
