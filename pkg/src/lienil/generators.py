"""Generating sets of the ideals T(n), T(3,2) and their variants, and finite
spanning sets of one multihomogeneous component of such an ideal.

Every family is a pattern multilinear in its slots, so an instance with
monomial slots is obtained by concatenating slot words along the pattern's
expanded terms.
"""

from __future__ import annotations

import contextlib
import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .freering import (
    MultiDegree,
    Polynomial,
    Word,
    bracket,
    multiset_permutations,
    word_key,
)
from .zmodule import Lattice, Vec

DEFAULT_MAX_DEGREE = 8
DEFAULT_MAX_VARS = 12

ARITY = {
    "C4": 4,
    "C33": 6,
    "C32_1": 5,
    "C32_2": 5,
    "C222": 6,
    "C32Sigma": 5,
    "C222Sigma": 6,
    "CUBE23": 5,
    "T32DEF": 5,
    "I32S": 5,
}


def perm_sign(perm: Sequence[int]) -> int:
    inv = 0
    n = len(perm)
    for i in range(n):
        for j in range(i + 1, n):
            if perm[i] > perm[j]:
                inv += 1
    return -1 if inv % 2 else 1


def adjacent_transpositions(n: int) -> List[Tuple[int, ...]]:
    out = []
    for i in range(n - 1):
        p = list(range(1, n + 1))
        p[i], p[i + 1] = p[i + 1], p[i]
        out.append(tuple(p))
    return out


@dataclass(frozen=True)
class GeneratorFamily:
    """One pattern of generators.

    ``param`` is the permutation for the sigma families (``None`` stands
    for all of S5 / S6), the length for ``CCk`` (``None``: every length
    >= 4 up to the degree) and n for ``TnDEF``.
    """

    tag: str
    param: object = None

    @property
    def arity(self) -> int:
        if self.tag == "CCk":
            if self.param is None:
                raise ValueError("CCk without a length has no fixed arity")
            return int(self.param)  # type: ignore[arg-type]
        if self.tag == "TnDEF":
            return int(self.param)  # type: ignore[arg-type]
        return ARITY[self.tag]

    def __str__(self) -> str:
        if self.param is None:
            return self.tag
        if isinstance(self.param, tuple):
            return f"{self.tag}[{''.join(map(str, self.param))}]"
        return f"{self.tag}({self.param})"


def _y(*idx: int) -> List[Polynomial]:
    return [Polynomial.var(i) for i in idx]


def _cube_pattern(order: Sequence[int]) -> Polynomial:
    a, b, c, d, e = _y(*order)
    return bracket(a, b) * bracket(c, d, e)


def _pattern(fam: GeneratorFamily) -> Polynomial:
    tag = fam.tag
    if tag == "C4":
        return bracket(*_y(1, 2, 3, 4))
    if tag == "C33":
        return bracket(*_y(1, 2, 3)) * bracket(*_y(4, 5, 6))
    if tag == "C32_1":
        return _cube_pattern((1, 2, 3, 4, 5)) + _cube_pattern((1, 5, 3, 4, 2))
    if tag == "C32_2":
        return _cube_pattern((1, 2, 3, 4, 5)) + _cube_pattern((1, 4, 3, 2, 5))
    if tag == "C222":
        y1, y2, y3, y4, y5, y6 = _y(1, 2, 3, 4, 5, 6)
        return (bracket(y1, y2) * bracket(y3, y4) + bracket(y1, y3) * bracket(y2, y4)) * bracket(y5, y6)
    if tag == "C32Sigma":
        s = fam.param
        return _cube_pattern((1, 2, 3, 4, 5)) - perm_sign(s) * _cube_pattern(s)  # type: ignore[arg-type]
    if tag == "C222Sigma":
        s = fam.param

        def three(o: Sequence[int]) -> Polynomial:
            a, b, c, d, e, f = _y(*o)
            return bracket(a, b) * bracket(c, d) * bracket(e, f)

        return three((1, 2, 3, 4, 5, 6)) - perm_sign(s) * three(s)  # type: ignore[arg-type]
    if tag == "CCk":
        return bracket(*_y(*range(1, fam.arity + 1)))
    if tag == "CUBE23" or tag == "T32DEF":
        return _cube_pattern((1, 2, 3, 4, 5))
    if tag == "TnDEF":
        return bracket(*_y(*range(1, fam.arity + 1)))
    if tag == "I32S":
        return bracket(*_y(1, 2, 3)) * bracket(*_y(4, 5))
    raise ValueError(f"unknown generator family {tag!r}")


# mutation-testing hook: tags listed here get a spurious monomial added
_CORRUPTED: set = set()


@contextlib.contextmanager
def corrupted(*tags: str) -> Iterator[None]:
    """Temporarily corrupt the given families (for mutation testing)."""
    before = set(_CORRUPTED)
    _CORRUPTED.update(tags)
    _template.cache.clear()
    try:
        yield
    finally:
        _CORRUPTED.clear()
        _CORRUPTED.update(before)
        _template.cache.clear()


def pattern(fam: GeneratorFamily) -> Polynomial:
    p = _pattern(fam)
    if fam.tag in _CORRUPTED:
        p = p + Polynomial.monomial(range(1, fam.arity + 1))
    return p


class _TemplateCache:
    def __init__(self) -> None:
        self.cache: Dict[GeneratorFamily, List[Tuple[Tuple[int, ...], int]]] = {}

    def __call__(self, fam: GeneratorFamily) -> List[Tuple[Tuple[int, ...], int]]:
        t = self.cache.get(fam)
        if t is None:
            # slot indices are 0-based positions into the slot tuple
            t = [(tuple(v - 1 for v in w), c) for w, c in pattern(fam).items()]
            self.cache[fam] = t
        return t


_template = _TemplateCache()


def instantiate(fam: GeneratorFamily, slots: Sequence[object]) -> Polynomial:
    """Expand the family's pattern with the given slot polynomials."""
    if len(slots) != fam.arity:
        raise ValueError(f"{fam} takes {fam.arity} slots, got {len(slots)}")
    from .freering import as_polynomial

    images = {i + 1: as_polynomial(s) for i, s in enumerate(slots)}  # type: ignore[arg-type]
    return pattern(fam).substitute(images)


def instance_terms(fam: GeneratorFamily, slot_words: Sequence[Word]) -> Dict[Word, int]:
    """Fast path of :func:`instantiate` for monomial slots."""
    out: Dict[Word, int] = {}
    for idx, c in _template(fam):
        w = tuple(itertools.chain.from_iterable(slot_words[i] for i in idx))
        v = out.get(w, 0) + c
        if v:
            out[w] = v
        else:
            del out[w]
    return out


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdealSpec:
    name: str
    families: Tuple[GeneratorFamily, ...]
    closure: str = "two-sided"  # or "left"
    slot_domain: str = "letters"  # or "monomials"
    description: str = ""

    def __post_init__(self) -> None:
        if self.closure not in ("two-sided", "left"):
            raise ValueError(f"bad closure {self.closure!r}")
        if self.slot_domain not in ("letters", "monomials"):
            raise ValueError(f"bad slot domain {self.slot_domain!r}")


def _F(tag: str, param: object = None) -> GeneratorFamily:
    return GeneratorFamily(tag, param)


SPECS: Dict[str, IdealSpec] = {
    "t2": IdealSpec("t2", (_F("TnDEF", 2),), "two-sided", "monomials", "T(2): all [a1,a2]"),
    "t3": IdealSpec("t3", (_F("TnDEF", 3),), "two-sided", "monomials", "T(3): all [a1,a2,a3]"),
    "t4": IdealSpec("t4", (_F("TnDEF", 4),), "two-sided", "monomials", "T(4): all [a1,a2,a3,a4]"),
    "t32": IdealSpec(
        "t32", (_F("TnDEF", 4), _F("T32DEF")), "two-sided", "monomials",
        "T(3,2): all [a1,a2,a3,a4] and [a1,a2][a3,a4,a5]",
    ),
    "thm13": IdealSpec(
        "thm13", (_F("C4"), _F("C33"), _F("C32_1"), _F("C32_2"), _F("C222")), "two-sided", "letters",
        "letter generators (c4), (c33), (c32-1), (c32-2), (c222)",
    ),
    "cor15": IdealSpec(
        "cor15", (_F("C4"), _F("C33"), _F("C32Sigma"), _F("C222Sigma")), "two-sided", "letters",
        "letter generators (c4), (c33) and the signed S5 / S6 permutation forms",
    ),
    "cor16": IdealSpec(
        "cor16", (_F("C4"), _F("C222"), _F("CUBE23")), "two-sided", "letters",
        "letter generators (c4), (c222) and [y1,y2][y3,y4,y5]; equals T(4) when 1/3 exists",
    ),
    "lemma32left": IdealSpec(
        "lemma32left", (_F("CCk"), _F("C33"), _F("C32Sigma"), _F("C222Sigma")), "left", "letters",
        "left ideal: letter commutators of length >= 4, (cc33), (cc32), (cc222)",
    ),
    "i32": IdealSpec(
        "i32", (_F("I32S"),), "two-sided", "letters",
        "two-sided ideal of [x_i1,x_i2,x_i3][x_i4,x_i5] with i1 < ... < i5",
    ),
}

ALIASES = {
    "T4-definitional": "t4", "T3-definitional": "t3", "T2-definitional": "t2",
    "T32-definitional": "t32", "THM13": "thm13", "COR15": "cor15", "COR16": "cor16",
    "LEMMA32-LEFT": "lemma32left", "I32": "i32",
}


def get_spec(name: "str | IdealSpec") -> IdealSpec:
    if isinstance(name, IdealSpec):
        return name
    key = ALIASES.get(name, name)
    try:
        return SPECS[key]
    except KeyError:
        raise ValueError(f"unknown ideal {name!r}; choose from {', '.join(SPECS)}") from None


def expand_families(spec: IdealSpec, total: int, sigma_mode: str = "coxeter") -> List[GeneratorFamily]:
    """Concrete families contributing at total degree ``total``.

    ``sigma_mode='coxeter'`` keeps only the adjacent transpositions of the
    permutation families.  This loses nothing: writing G(y, s) for the
    signed difference, G(y, st) = G(y, s) + sgn(s) G(y o s, t), and the slot
    assignments are closed under permuting positions.
    """
    out: List[GeneratorFamily] = []
    for fam in spec.families:
        if fam.tag == "CCk" and fam.param is None:
            out.extend(GeneratorFamily("CCk", k) for k in range(4, total + 1))
        elif fam.tag in ("C32Sigma", "C222Sigma") and fam.param is None:
            n = ARITY[fam.tag]
            if sigma_mode == "coxeter":
                perms = adjacent_transpositions(n)
            elif sigma_mode == "full":
                perms = [p for p in itertools.permutations(range(1, n + 1)) if p != tuple(range(1, n + 1))]
            else:
                raise ValueError(f"bad sigma_mode {sigma_mode!r}")
            out.extend(GeneratorFamily(fam.tag, p) for p in perms)
        else:
            out.append(fam)
    return [f for f in out if f.arity <= total]


def _sub_sequences(counts: Dict[int, int], k: int) -> Iterator[Word]:
    """Ordered length-k sequences drawn from a multiset without over-use."""
    keys = sorted(counts)
    seq: List[int] = []

    def rec() -> Iterator[Word]:
        if len(seq) == k:
            yield tuple(seq)
            return
        for x in keys:
            if counts[x]:
                counts[x] -= 1
                seq.append(x)
                yield from rec()
                seq.pop()
                counts[x] += 1

    return rec()


def _counts(letters: Sequence[int]) -> Dict[int, int]:
    c: Dict[int, int] = {}
    for x in letters:
        c[x] = c.get(x, 0) + 1
    return c


def _remaining(counts: Dict[int, int], used: Sequence[int]) -> List[int]:
    c = dict(counts)
    for x in used:
        c[x] -= 1
    return [x for x in sorted(c) for _ in range(c[x])]


def _cofactor_pairs(rest: List[int], closure: str) -> List[Tuple[Word, Word]]:
    pairs = []
    for arr in multiset_permutations(rest):
        if closure == "left":
            pairs.append((arr, ()))
        else:
            for i in range(len(arr) + 1):
                pairs.append((arr[:i], arr[i:]))
    return pairs


def _compositions(n: int, parts: int, first_free: bool, last_free: bool) -> Iterator[Tuple[int, ...]]:
    """Ordered part sizes summing to n; inner parts are >= 1."""
    lo = [1] * parts
    if first_free:
        lo[0] = 0
    if last_free:
        lo[-1] = 0

    def rec(i: int, left: int, acc: List[int]) -> Iterator[Tuple[int, ...]]:
        if i == parts - 1:
            if left >= lo[i]:
                yield tuple(acc + [left])
            return
        rest_min = sum(lo[i + 1:])
        for s in range(lo[i], left - rest_min + 1):
            yield from rec(i + 1, left - s, acc + [s])

    return rec(0, n, [])


def iter_instances(spec: "str | IdealSpec", d: MultiDegree, sigma_mode: str = "coxeter") -> Iterator[Dict[Word, int]]:
    """Yield the (possibly repeated or zero) multiples a*g*b of generator
    instances g whose multidegree is exactly ``d``."""
    spec = get_spec(spec)
    letters = d.letters()
    n = len(letters)
    counts = _counts(letters)
    for fam in expand_families(spec, n, sigma_mode):
        k = fam.arity
        if spec.slot_domain == "monomials":
            # cofactor parts: a on the left, b on the right (two-sided only)
            nparts = k + 2 if spec.closure == "two-sided" else k + 1
            for word in multiset_permutations(letters):
                for sizes in _compositions(n, nparts, True, nparts == k + 2):
                    cuts = [0]
                    for s in sizes:
                        cuts.append(cuts[-1] + s)
                    parts = [word[cuts[i]:cuts[i + 1]] for i in range(nparts)]
                    g = instance_terms(fam, parts[1:k + 1])
                    if not g:
                        continue
                    a = parts[0]
                    b = parts[k + 1] if nparts == k + 2 else ()
                    yield {a + w + b: c for w, c in g.items()}
            continue
        if fam.tag == "I32S":
            seqs: Iterator[Word] = (
                s for s in itertools.combinations(sorted(counts), k) if all(counts[x] for x in s)
            )
        else:
            seqs = _sub_sequences(dict(counts), k)
        for seq in seqs:
            g = instance_terms(fam, [(x,) for x in seq])
            if not g:
                continue
            for a, b in _cofactor_pairs(_remaining(counts, seq), spec.closure):
                if not a and not b:
                    yield g
                else:
                    yield {a + w + b: c for w, c in g.items()}


@dataclass
class Component:
    """The monomial basis of one multidegree, with a word -> row index map."""

    degree: MultiDegree
    words: List[Word] = field(default_factory=list)
    index: Dict[Word, int] = field(default_factory=dict)

    @classmethod
    def of(cls, d: MultiDegree) -> "Component":
        words = d.monomials()
        return cls(d, words, {w: i for i, w in enumerate(words)})

    @property
    def dim(self) -> int:
        return len(self.words)

    def vector(self, p: "Polynomial | Dict[Word, int]") -> Vec:
        terms = p.terms if isinstance(p, Polynomial) else p
        try:
            return {self.index[w]: c for w, c in terms.items()}
        except KeyError as exc:
            raise ValueError(f"monomial {exc.args[0]} is not of multidegree {self.degree}") from None

    def polynomial(self, v: Vec) -> Polynomial:
        return Polynomial({self.words[i]: c for i, c in v.items()})


_COMPONENTS: Dict[MultiDegree, Component] = {}


def component(d: MultiDegree) -> Component:
    c = _COMPONENTS.get(d)
    if c is None:
        c = _COMPONENTS[d] = Component.of(d)
    return c


def check_caps(d: MultiDegree, max_degree: int = DEFAULT_MAX_DEGREE, max_vars: int = DEFAULT_MAX_VARS) -> None:
    if d.total > max_degree:
        raise ValueError(f"total degree {d.total} exceeds the cap {max_degree}")
    if len(d.exponents) > max_vars:
        raise ValueError(f"{len(d.exponents)} variables exceed the cap {max_vars}")


def _sign_key(v: Vec) -> Tuple[Tuple[int, int], ...]:
    items = sorted(v.items())
    if items[0][1] < 0:
        items = [(k, -c) for k, c in items]
    return tuple(items)


def component_vectors(
    spec: "str | IdealSpec",
    d: MultiDegree,
    sigma_mode: str = "coxeter",
    max_degree: int = DEFAULT_MAX_DEGREE,
) -> List[Vec]:
    """Deduplicated spanning vectors (row indices of ``component(d)``)."""
    check_caps(d, max_degree)
    comp = component(d)
    index = comp.index
    seen = set()
    out: List[Vec] = []
    for terms in iter_instances(spec, d, sigma_mode):
        v = {index[w]: c for w, c in terms.items()}
        if not v:
            continue
        key = _sign_key(v)
        if key in seen:
            continue
        seen.add(key)
        out.append(dict(key))
    out.sort(key=lambda v: sorted(v.items()))
    return out


def component_span(
    spec: "str | IdealSpec",
    d: MultiDegree,
    sigma_mode: str = "coxeter",
    max_degree: int = DEFAULT_MAX_DEGREE,
) -> List[Polynomial]:
    """A finite list of polynomials of multidegree ``d`` whose integer span
    is the degree-``d`` component of the ideal."""
    comp = component(d)
    return [comp.polynomial(v) for v in component_vectors(spec, d, sigma_mode, max_degree)]


# ---------------------------------------------------------------------------
# cached lattices of components


_LATTICES: Dict[Tuple[str, MultiDegree, Optional[int], str], Lattice] = {}


def component_lattice(
    spec: "str | IdealSpec",
    d: MultiDegree,
    modulus: Optional[int] = None,
    sigma_mode: str = "coxeter",
    max_degree: int = DEFAULT_MAX_DEGREE,
) -> Lattice:
    spec = get_spec(spec)
    key = (spec.name, d, modulus, sigma_mode)
    lat = None if _CORRUPTED else _LATTICES.get(key)
    if lat is None:
        lat = Lattice(component(d).dim, modulus)
        lat.extend(component_vectors(spec, d, sigma_mode, max_degree))
        lat.rank  # finalize once, before caching
        if not _CORRUPTED:
            _LATTICES[key] = lat
    return lat


def union_lattice(specs: Sequence[str], d: MultiDegree, modulus: Optional[int] = None) -> Lattice:
    lat = Lattice(component(d).dim, modulus)
    for s in specs:
        lat.extend(component_lattice(s, d, modulus).basis())
    return lat


def clear_cache() -> None:
    _LATTICES.clear()


def span_equal(a: Sequence[Polynomial], b: Sequence[Polynomial], d: MultiDegree, modulus: Optional[int] = None) -> bool:
    """Do the two lists span the same submodule of the degree-``d`` component?"""
    for p in list(a) + list(b):
        if p and p.multidegree() != d:
            raise ValueError(f"{p} is not of multidegree {d}")
    comp = component(d)
    la = Lattice(comp.dim, modulus)
    la.extend(comp.vector(p) for p in a)
    lb = Lattice(comp.dim, modulus)
    lb.extend(comp.vector(p) for p in b)
    return lattices_equal(la, lb)


def lattices_equal(la: Lattice, lb: Lattice) -> bool:
    return la.rank == lb.rank and la.contains_lattice(lb) and lb.contains_lattice(la)


def compositions_up_to(max_total: int, min_total: int = 1) -> List[MultiDegree]:
    """Every multidegree x1^e1 ... xm^em with all ei >= 1 and given totals."""
    out = []
    for n in range(min_total, max_total + 1):
        for parts in _all_compositions(n):
            out.append(MultiDegree(parts))
    return out


def _all_compositions(n: int) -> Iterator[Tuple[int, ...]]:
    for mask in range(1 << (n - 1)):
        parts, run = [], 1
        for i in range(n - 1):
            if mask >> i & 1:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        yield tuple(parts)


def sorted_words(words: Sequence[Word]) -> List[Word]:
    return sorted(words, key=word_key)
