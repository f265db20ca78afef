"""Exact arithmetic in the free unital associative ring Z<x1, x2, ...>.

A monomial is a tuple of positive variable indices (``()`` is the unit),
a polynomial is an immutable sparse map from monomials to nonzero Python
integers.  Terms are kept in graded-lexicographic order whenever an order
is needed, with x1 < x2 < ...
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple, Union

Word = Tuple[int, ...]
Terms = Dict[Word, int]


def word_key(word: Word) -> Tuple[int, Word]:
    """Graded-lexicographic sort key for words."""
    return (len(word), word)


# ---------------------------------------------------------------------------
# raw dict helpers; hot loops in the other modules go through these


def add_into(acc: Terms, other: Mapping[Word, int], scale: int = 1) -> None:
    for w, c in other.items():
        v = acc.get(w, 0) + scale * c
        if v:
            acc[w] = v
        else:
            acc.pop(w, None)


def mul_terms(a: Mapping[Word, int], b: Mapping[Word, int]) -> Terms:
    out: Terms = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w = wa + wb
            v = out.get(w, 0) + ca * cb
            if v:
                out[w] = v
            else:
                del out[w]
    return out


def bracket_terms(a: Mapping[Word, int], b: Mapping[Word, int]) -> Terms:
    out = mul_terms(a, b)
    add_into(out, mul_terms(b, a), -1)
    return out


# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class MultiDegree:
    """Exponent vector; ``exponents[i]`` is the degree in x_{i+1}.

    Trailing zeros are stripped so equal multidegrees compare equal.
    """

    exponents: Tuple[int, ...]

    def __post_init__(self) -> None:
        exps = tuple(int(e) for e in self.exponents)
        if any(e < 0 for e in exps):
            raise ValueError(f"negative exponent in {exps}")
        while exps and exps[-1] == 0:
            exps = exps[:-1]
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def of_word(cls, word: Word) -> "MultiDegree":
        if not word:
            return cls(())
        exps = [0] * max(word)
        for v in word:
            exps[v - 1] += 1
        return cls(tuple(exps))

    @classmethod
    def from_dict(cls, exps: Mapping[int, int]) -> "MultiDegree":
        if not any(exps.values()):
            return cls(())
        out = [0] * max(v for v, e in exps.items() if e)
        for v, e in exps.items():
            if e:
                out[v - 1] = e
        return cls(tuple(out))

    @classmethod
    def multilinear(cls, n: int) -> "MultiDegree":
        return cls((1,) * n)

    @classmethod
    def parse(cls, text: str) -> "MultiDegree":
        text = text.strip().strip("()")
        if not text:
            return cls(())
        try:
            return cls(tuple(int(t) for t in text.split(",")))
        except ValueError:
            raise ValueError(f"bad multidegree {text!r}") from None

    @property
    def total(self) -> int:
        return sum(self.exponents)

    def as_dict(self) -> Dict[int, int]:
        return {i + 1: e for i, e in enumerate(self.exponents) if e}

    @property
    def variables(self) -> Tuple[int, ...]:
        return tuple(i + 1 for i, e in enumerate(self.exponents) if e)

    def letters(self) -> Tuple[int, ...]:
        """The sorted multiset of variables, e.g. (2,1) -> (1, 1, 2)."""
        return tuple(v for i, e in enumerate(self.exponents) for v in [i + 1] * e)

    def is_multilinear(self) -> bool:
        return all(e <= 1 for e in self.exponents)

    def monomials(self) -> List[Word]:
        """All words of this multidegree in graded-lex order."""
        return sorted(multiset_permutations(self.letters()))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.exponents)) + ")"


def multiset_permutations(items: Sequence[int]) -> Iterator[Word]:
    """Distinct permutations of a multiset, in lexicographic order."""
    counts: Dict[int, int] = {}
    for x in items:
        counts[x] = counts.get(x, 0) + 1
    keys = sorted(counts)
    n = len(items)
    prefix: List[int] = []

    def rec() -> Iterator[Word]:
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for k in keys:
            if counts[k]:
                counts[k] -= 1
                prefix.append(k)
                yield from rec()
                prefix.pop()
                counts[k] += 1

    return rec()


class Polynomial:
    """An element of Z<X>.  Immutable; supports ``+ - *`` and ``==``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Union[Mapping[Word, int], None] = None) -> None:
        clean: Terms = {}
        if terms:
            for w, c in terms.items():
                if c:
                    clean[tuple(w)] = int(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _wrap(cls, terms: Terms) -> "Polynomial":
        # caller guarantees no zero coefficients
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def var(cls, i: int) -> "Polynomial":
        if i < 1:
            raise ValueError(f"variable index must be >= 1, got {i}")
        return cls._wrap({(i,): 1})

    @classmethod
    def one(cls) -> "Polynomial":
        return cls._wrap({(): 1})

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls._wrap({})

    @classmethod
    def constant(cls, c: int) -> "Polynomial":
        return cls({(): c})

    @classmethod
    def monomial(cls, word: Iterable[int], coef: int = 1) -> "Polynomial":
        return cls({tuple(word): coef})

    # -- access ------------------------------------------------------------

    @property
    def terms(self) -> Mapping[Word, int]:
        return dict(self._terms)

    def items(self) -> List[Tuple[Word, int]]:
        """Terms in graded-lex order."""
        return sorted(self._terms.items(), key=lambda t: word_key(t[0]))

    def coefficient(self, word: Iterable[int]) -> int:
        return self._terms.get(tuple(word), 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((len(w) for w in self._terms), default=-1)

    def variables(self) -> Tuple[int, ...]:
        return tuple(sorted({v for w in self._terms for v in w}))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: object) -> "Polynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        add_into(out, other._terms)
        return Polynomial._wrap(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._wrap({w: -c for w, c in self._terms.items()})

    def __sub__(self, other: object) -> "Polynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        add_into(out, other._terms, -1)
        return Polynomial._wrap(out)

    def __rsub__(self, other: object) -> "Polynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other: object) -> "Polynomial":
        if isinstance(other, int):
            if not other:
                return Polynomial.zero()
            return Polynomial._wrap({w: c * other for w, c in self._terms.items()})
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Polynomial._wrap(mul_terms(self._terms, other._terms))

    def __rmul__(self, other: object) -> "Polynomial":
        if isinstance(other, int):
            return self * other
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        out = Polynomial.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- structure ---------------------------------------------------------

    def components(self) -> Dict[MultiDegree, "Polynomial"]:
        return multihomogeneous_components(self)

    def is_multihomogeneous(self) -> bool:
        return len({MultiDegree.of_word(w) for w in self._terms}) <= 1

    def multidegree(self) -> MultiDegree:
        """The multidegree of a nonzero multihomogeneous polynomial."""
        degs = {MultiDegree.of_word(w) for w in self._terms}
        if len(degs) != 1:
            raise ValueError("polynomial is not multihomogeneous (or is zero)")
        return degs.pop()

    def substitute(self, assignment: Mapping[int, "Polynomial"]) -> "Polynomial":
        return substitute(self, assignment)

    def relabel(self, mapping: Mapping[int, int]) -> "Polynomial":
        """Rename variables; indices absent from ``mapping`` are kept."""
        out: Terms = {}
        for w, c in self._terms.items():
            nw = tuple(mapping.get(v, v) for v in w)
            out[nw] = out.get(nw, 0) + c
        return Polynomial(out)

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"


def _coerce(x: object) -> "Polynomial":
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, int):
        return Polynomial.constant(x)
    return NotImplemented  # type: ignore[return-value]


def as_polynomial(x: Union[Polynomial, int, str]) -> Polynomial:
    if isinstance(x, str):
        return parse(x)
    p = _coerce(x)
    if p is NotImplemented:
        raise TypeError(f"cannot convert {type(x).__name__} to Polynomial")
    return p


def multiply(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def left_normed_bracket(*args: Union[Polynomial, int, str]) -> Polynomial:
    """[a1, a2, ..., an] = [[a1, a2], ..., an], with [a, b] = ab - ba."""
    if len(args) == 1 and isinstance(args[0], (list, tuple)):
        args = tuple(args[0])
    if len(args) < 2:
        raise ValueError("a commutator needs at least two arguments")
    polys = [as_polynomial(a) for a in args]
    acc = polys[0]._terms
    for q in polys[1:]:
        acc = bracket_terms(acc, q._terms)
    return Polynomial._wrap(acc)


bracket = left_normed_bracket


def multihomogeneous_components(p: Polynomial) -> Dict[MultiDegree, Polynomial]:
    parts: Dict[MultiDegree, Terms] = {}
    for w, c in p._terms.items():
        parts.setdefault(MultiDegree.of_word(w), {})[w] = c
    return {d: Polynomial._wrap(t) for d, t in sorted(parts.items(), key=lambda kv: (kv[0].total, kv[0]))}


def substitute(p: Polynomial, assignment: Mapping[int, Polynomial]) -> Polynomial:
    """Image of ``p`` under the endomorphism x_i -> assignment[i]."""
    images = {}
    for v in p.variables():
        if v not in assignment:
            raise ValueError(f"no assignment for x{v}")
        images[v] = as_polynomial(assignment[v])._terms
    out: Terms = {}
    for w, c in p._terms.items():
        acc: Terms = {(): c}
        for v in w:
            acc = mul_terms(acc, images[v])
            if not acc:
                break
        add_into(out, acc)
    return Polynomial._wrap(out)


# ---------------------------------------------------------------------------
# text form


class ParseError(ValueError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(r"\s*(?:(x)(\d+)|(\d+)|([-+*(),\[\]]))")


def _tokenize(text: str) -> List[Tuple[str, object, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(0) + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.group(1):
            idx = int(m.group(2))
            if idx < 1:
                raise ParseError("variable index must be >= 1", start)
            tokens.append(("var", idx, start))
        elif m.group(3):
            tokens.append(("int", int(m.group(3)), start))
        else:
            tokens.append((m.group(4), None, start))
        pos = m.end(0)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def pos(self) -> int:
        return self.tokens[self.i][2]

    def take(self, kind: str) -> Tuple[str, object, int]:
        tok = self.tokens[self.i]
        if tok[0] != kind:
            found = "end of input" if tok[0] == "end" else repr(tok[0])
            raise ParseError(f"expected {kind!r}, found {found}", tok[2])
        self.i += 1
        return tok

    def expr(self) -> Polynomial:
        acc = self.term()
        while self.peek() in "+-":
            op = self.take(self.peek())[0]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> Polynomial:
        acc = self.unary()
        while self.peek() == "*":
            self.take("*")
            acc = acc * self.unary()
        return acc

    def unary(self) -> Polynomial:
        if self.peek() == "-":
            self.take("-")
            return -self.unary()
        if self.peek() == "+":
            self.take("+")
            return self.unary()
        return self.atom()

    def atom(self) -> Polynomial:
        kind, val, pos = self.tokens[self.i]
        if kind == "var":
            self.i += 1
            return Polynomial.var(val)  # type: ignore[arg-type]
        if kind == "int":
            self.i += 1
            return Polynomial.constant(val)  # type: ignore[arg-type]
        if kind == "(":
            self.i += 1
            inner = self.expr()
            self.take(")")
            return inner
        if kind == "[":
            self.i += 1
            args = [self.expr()]
            while self.peek() == ",":
                self.take(",")
                args.append(self.expr())
            end = self.pos()
            self.take("]")
            if len(args) < 2:
                raise ParseError("commutator needs at least two arguments", end)
            return left_normed_bracket(*args)
        found = "end of input" if kind == "end" else repr(kind)
        raise ParseError(f"unexpected {found}", pos)


def parse(text: str) -> Polynomial:
    """Parse an expression such as ``"3*x1*x2 - [x1,x2,x3]"``."""
    p = _Parser(text)
    result = p.expr()
    if p.peek() != "end":
        raise ParseError(f"unexpected {p.peek()!r}", p.pos())
    return result


def format_word(word: Word) -> str:
    return "*".join(f"x{v}" for v in word) if word else "1"


def format_polynomial(p: Polynomial) -> str:
    items = p.items()
    if not items:
        return "0"
    parts = []
    for k, (w, c) in enumerate(items):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not w:
            body = str(a)
        elif a == 1:
            body = format_word(w)
        else:
            body = f"{a}*{format_word(w)}"
        if k == 0:
            parts.append(body if sign == "+" else "-" + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)
