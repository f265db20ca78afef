"""The proper subring Gamma generated by commutators: commutator products,
the Specht basis of the multilinear part, the index sets C and D, and the
decomposition of Z<X> into sorted prefixes times Gamma.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Sequence, Tuple

from .freering import MultiDegree, Polynomial, Word, add_into, bracket_terms, mul_terms, word_key
from .zmodule import Lattice, Vec


@dataclass(frozen=True, order=True)
class Commutator:
    """Left-normed commutator [x_v1, ..., x_vl] of letters, l >= 2."""

    vars: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.vars) < 2:
            raise ValueError("a commutator needs at least two entries")
        if any(v < 1 for v in self.vars):
            raise ValueError("variable indices start at 1")

    @property
    def length(self) -> int:
        return len(self.vars)

    @property
    def first(self) -> int:
        return self.vars[0]

    def terms(self) -> Dict[Word, int]:
        return dict(_commutator_terms(self.vars))

    def expand(self) -> Polynomial:
        return Polynomial(_commutator_terms(self.vars))

    def __str__(self) -> str:
        return "[" + ",".join(f"x{v}" for v in self.vars) + "]"


@lru_cache(maxsize=None)
def _commutator_terms(vs: Tuple[int, ...]) -> Dict[Word, int]:
    acc: Dict[Word, int] = {(vs[0],): 1}
    for v in vs[1:]:
        acc = bracket_terms(acc, {(v,): 1})
    return acc


@dataclass(frozen=True, order=True)
class CommutatorProduct:
    """Formal product c1 c2 ... cm of commutators; the empty product is 1."""

    factors: Tuple[Commutator, ...] = ()

    @classmethod
    def of(cls, *blocks: Sequence[int]) -> "CommutatorProduct":
        return cls(tuple(Commutator(tuple(b)) for b in blocks))

    @classmethod
    def c_index(cls, word: Sequence[int]) -> "CommutatorProduct":
        """c_{i1...i_{2k+3}} = [x_i1,x_i2]...[x_i(2k-1),x_i2k][x_i(2k+1),x_i(2k+2),x_i(2k+3)]."""
        n = len(word)
        if n < 5 or n % 2 == 0:
            raise ValueError("index word must have odd length >= 5")
        blocks = [word[i:i + 2] for i in range(0, n - 3, 2)] + [word[n - 3:]]
        return cls.of(*blocks)

    @property
    def lengths(self) -> Tuple[int, ...]:
        return tuple(c.length for c in self.factors)

    @property
    def letters(self) -> Tuple[int, ...]:
        return tuple(v for c in self.factors for v in c.vars)

    def multidegree(self) -> MultiDegree:
        return MultiDegree.of_word(self.letters)

    def in_p(self) -> bool:
        """Nondecreasing factor lengths (membership in the spanning set P)."""
        ls = self.lengths
        return all(a <= b for a, b in zip(ls, ls[1:]))

    def is_specht(self) -> bool:
        if not self.in_p():
            return False
        for c in self.factors:
            if c.first != max(c.vars):
                return False
        for a, b in zip(self.factors, self.factors[1:]):
            if a.length == b.length and not a.first < b.first:
                return False
        return len(set(self.letters)) == len(self.letters)

    def terms(self) -> Dict[Word, int]:
        acc: Dict[Word, int] = {(): 1}
        for c in self.factors:
            acc = mul_terms(acc, _commutator_terms(c.vars))
        return acc

    def expand(self) -> Polynomial:
        return Polynomial(self.terms())

    def sort_key(self) -> Tuple[Tuple[int, ...], Tuple[Tuple[int, ...], ...]]:
        return (self.lengths, tuple(c.vars for c in self.factors))

    def __str__(self) -> str:
        return "".join(str(c) for c in self.factors) if self.factors else "1"


def expand(cp: CommutatorProduct) -> Polynomial:
    return cp.expand()


# ---------------------------------------------------------------------------
# Specht basis


def _set_partitions(items: Tuple[int, ...], min_block: int) -> Iterator[List[Tuple[int, ...]]]:
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for size in range(min_block - 1, len(rest) + 1):
        for others in itertools.combinations(rest, size):
            block = (head,) + others
            left = tuple(x for x in rest if x not in others)
            for tail in _set_partitions(left, min_block):
                yield [block] + tail


def enumerate_specht_basis(n: int) -> List[CommutatorProduct]:
    """Products of commutators forming the Specht basis of P_n within Gamma:
    multilinear in x1..xn, the largest index first in every factor, factor
    lengths nondecreasing, equal-length neighbours ordered by first entry."""
    if n < 2:
        raise ValueError("the Specht basis is defined for n >= 2")
    out = []
    for blocks in _set_partitions(tuple(range(1, n + 1)), 2):
        choices = []
        for b in blocks:
            top = max(b)
            rest = [x for x in b if x != top]
            choices.append([Commutator((top,) + p) for p in itertools.permutations(rest)])
        for combo in itertools.product(*choices):
            factors = tuple(sorted(combo, key=lambda c: (c.length, c.first)))
            out.append(CommutatorProduct(factors))
    out.sort(key=CommutatorProduct.sort_key)
    return out


def derangements(n: int) -> int:
    a, b = 1, 0  # D0, D1
    if n == 0:
        return 1
    for m in range(2, n + 1):
        a, b = b, (m - 1) * (a + b)
    return b


# ---------------------------------------------------------------------------
# the index sets C and D


def _cd_words(k: int) -> List[Tuple[int, ...]]:
    if k < 1:
        raise ValueError("k must be >= 1")
    n = 2 * k + 3
    out = []
    for w in itertools.permutations(range(1, n + 1)):
        pairs_ok = all(w[2 * j] > w[2 * j + 1] for j in range(k))
        heads_ok = all(w[2 * j] < w[2 * j + 2] for j in range(k - 1))
        tail_ok = w[n - 3] > w[n - 2] and w[n - 3] > w[n - 1]
        if pairs_ok and heads_ok and tail_ok:
            out.append(w)
    return out


def enumerate_cset(k: int) -> List[CommutatorProduct]:
    """C: the products c_w for the index words w of :func:`enumerate_dset`."""
    return [CommutatorProduct.c_index(w) for w in _cd_words(k)]


def enumerate_dset(k: int) -> List[Tuple[int, ...]]:
    """D: index words w of S_{2k+3} with w1 > w2, ..., w(2k-1) > w2k,
    w(2k+1) > w(2k+2), w(2k+3) and w1 < w3 < ... < w(2k-1)."""
    return _cd_words(k)


# ---------------------------------------------------------------------------
# spanning sets of Gamma components


def _nondecreasing_splits(n: int, smallest: int = 2) -> Iterator[Tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for s in range(smallest, n + 1):
        for rest in _nondecreasing_splits(n - s, s):
            yield (s,) + rest


def gamma_component_span(d: MultiDegree, max_degree: int = 8) -> List[CommutatorProduct]:
    """Products in P of multidegree exactly d.

    Commutators are normalized to a first entry below the second one: the
    other order only changes the sign and equal entries give zero.
    """
    if d.total > max_degree:
        raise ValueError(f"total degree {d.total} exceeds the cap {max_degree}")
    from .freering import multiset_permutations

    letters = d.letters()
    out = set()
    for word in multiset_permutations(letters):
        for sizes in _nondecreasing_splits(len(word)):
            blocks, pos, ok = [], 0, True
            for s in sizes:
                b = word[pos:pos + s]
                pos += s
                if b[0] >= b[1]:
                    ok = False
                    break
                blocks.append(b)
            if ok:
                out.add(CommutatorProduct.of(*blocks))
    return sorted(out, key=CommutatorProduct.sort_key)


# ---------------------------------------------------------------------------
# Z<X> = direct sum of sorted prefixes times Gamma


_DECOMP: Dict[MultiDegree, Tuple[Lattice, List[Tuple[Word, CommutatorProduct]], Dict[Word, int]]] = {}


def _sorted_prefixes(d: MultiDegree) -> Iterator[Word]:
    counts = d.as_dict()
    vs = sorted(counts)
    for take in itertools.product(*[range(counts[v] + 1) for v in vs]):
        yield tuple(v for v, t in zip(vs, take) for _ in range(t))


def _decomposition_system(d: MultiDegree):
    entry = _DECOMP.get(d)
    if entry is None:
        words = d.monomials()
        index = {w: i for i, w in enumerate(words)}
        lat = Lattice(len(words), track=True)
        labels: List[Tuple[Word, CommutatorProduct]] = []
        counts = d.as_dict()
        for prefix in _sorted_prefixes(d):
            rest = dict(counts)
            for v in prefix:
                rest[v] -= 1
            rd = MultiDegree.from_dict(rest)
            gens = gamma_component_span(rd, max_degree=64) if rd.total else [CommutatorProduct()]
            for g in gens:
                vec = {index[prefix + w]: c for w, c in g.terms().items()}
                lat.add(vec)
                labels.append((prefix, g))
        entry = (lat, labels, index)
        _DECOMP[d] = entry
    return entry


def prefix_gamma_decompose(p: Polynomial, max_degree: int = 8) -> List[Tuple[Word, Polynomial]]:
    """Write p as a sum of x_j1...x_jl * g_j with j1 <= ... <= jl and g_j in
    Gamma.  The pieces are unique; they are returned sorted by prefix."""
    pieces: Dict[Word, Dict[Word, int]] = {}
    for d, comp in p.components().items():
        if d.total > max_degree:
            raise ValueError(f"total degree {d.total} exceeds the cap {max_degree}")
        lat, labels, index = _decomposition_system(d)
        sol = lat.solve({index[w]: c for w, c in comp.terms.items()})
        if sol is None:  # pragma: no cover - would contradict the direct-sum decomposition
            raise AssertionError(f"no prefix/Gamma decomposition found for component {d}")
        for j, c in sol.items():
            if not c:
                continue
            prefix, g = labels[j]
            add_into(pieces.setdefault(prefix, {}), g.terms(), c)
    out = [(w, Polynomial(t)) for w, t in pieces.items()]
    out = [(w, g) for w, g in out if g]
    out.sort(key=lambda item: word_key(item[0]))
    return out


def reassemble(pieces: Sequence[Tuple[Word, Polynomial]]) -> Polynomial:
    total = Polynomial.zero()
    for w, g in pieces:
        total = total + Polynomial.monomial(w) * g
    return total


# ---------------------------------------------------------------------------
# the subgroup W' of W = P_{2k+3} within Gamma


def w_prime_generators(n: int) -> List[CommutatorProduct]:
    """Products in P, multilinear in x1..xn, whose last factor has length >= 4
    or whose last two factors both have length 3."""
    d = MultiDegree.multilinear(n)
    out = []
    for cp in gamma_component_span(d, max_degree=64):
        ls = cp.lengths
        if ls[-1] >= 4 or (len(ls) >= 2 and ls[-1] == 3 and ls[-2] == 3):
            out.append(cp)
    return out


def w_prime_specht(n: int) -> List[CommutatorProduct]:
    """Specht basis elements spanning W' (same length conditions)."""
    out = []
    for cp in enumerate_specht_basis(n):
        ls = cp.lengths
        if ls[-1] >= 4 or (len(ls) >= 2 and ls[-1] == 3 and ls[-2] == 3):
            out.append(cp)
    return out


def w_quotient_basis(n: int) -> List[CommutatorProduct]:
    """Specht elements whose images form a basis of W/W': all factors of
    length 2 except a final one of length 3."""
    return [cp for cp in enumerate_specht_basis(n) if cp.lengths[-1] == 3 and all(x == 2 for x in cp.lengths[:-1])]
