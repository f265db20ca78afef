"""Exact sparse linear algebra over Z and F_p.

Vectors are ``dict`` maps from coordinate to nonzero integer.  The workhorse
is :class:`Lattice`, an incremental echelon basis of the submodule spanned
by the vectors added so far.  It keeps two kinds of basis rows:

* unit rows: a pivot coordinate with entry 1, zero at every other unit
  pivot (so reduction against them is a single pass);
* general rows: everything whose residual has no unit entry, kept in a
  gcd-based echelon form on the remaining coordinates.

Over F_p every row is a unit row.  Since Z^n / L is isomorphic to
Z^N / span(general rows), where N are the coordinates that are not unit
pivots, elementary divisors only need a dense Smith form of the small
general part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, IO, Iterable, List, Optional, Sequence, Tuple

Vec = Dict[int, int]


class ZModuleError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def _axpy(dst: Vec, src: Vec, q: int) -> None:
    """dst += q * src."""
    for k, v in src.items():
        nv = dst.get(k, 0) + q * v
        if nv:
            dst[k] = nv
        else:
            del dst[k]


def _axpy_mod(dst: Vec, src: Vec, q: int, p: int) -> None:
    for k, v in src.items():
        nv = (dst.get(k, 0) + q * v) % p
        if nv:
            dst[k] = nv
        else:
            dst.pop(k, None)


def _scaled(v: Vec, q: int) -> Vec:
    return {k: q * x for k, x in v.items()} if q else {}


def _lin2(a: Vec, x: int, b: Vec, y: int) -> Vec:
    out = _scaled(a, x)
    _axpy(out, b, y)
    return out


# ---------------------------------------------------------------------------


@dataclass
class SparseIntMatrix:
    """Integer matrix stored as a list of sparse columns.

    ``row_labels`` optionally names the rows (monomials of one component).
    """

    nrows: int
    columns: List[Vec]
    row_labels: Optional[List[object]] = None

    def __post_init__(self) -> None:
        cols = []
        for c in self.columns:
            clean = {int(k): int(v) for k, v in c.items() if v}
            if any(k < 0 or k >= self.nrows for k in clean):
                raise ZModuleError("column entry outside the row range")
            cols.append(clean)
        self.columns = cols
        if self.row_labels is not None and len(self.row_labels) != self.nrows:
            raise ZModuleError("row_labels length does not match nrows")

    @property
    def ncols(self) -> int:
        return len(self.columns)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> "SparseIntMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        cols = [{i: rows[i][j] for i in range(nrows) if rows[i][j]} for j in range(ncols)]
        return cls(nrows, cols)

    @classmethod
    def from_polynomials(cls, polys: Iterable[object], rows: Sequence[object]) -> "SparseIntMatrix":
        index = {w: i for i, w in enumerate(rows)}
        cols = []
        for p in polys:
            col = {}
            for w, c in p.terms.items():  # type: ignore[attr-defined]
                if w not in index:
                    raise ZModuleError(f"monomial {w} outside the row index set")
                col[index[w]] = c
            cols.append(col)
        return cls(len(rows), cols, list(rows))

    def to_dense(self) -> List[List[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    def column_dense(self, j: int) -> List[int]:
        v = [0] * self.nrows
        for i, x in self.columns[j].items():
            v[i] = x
        return v

    def dump(self, stream: IO[str]) -> None:
        """Write ``rows cols`` then one ``row col value`` line per entry."""
        stream.write(f"{self.nrows} {self.ncols}\n")
        for j, col in enumerate(self.columns):
            for i in sorted(col):
                stream.write(f"{i} {j} {col[i]}\n")


def matmul_dense(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> List[List[int]]:
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def identity(n: int) -> List[List[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def det_bareiss(a: Sequence[Sequence[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# ---------------------------------------------------------------------------


class Lattice:
    """Span of integer vectors in Z^dim (or F_p^dim when ``modulus`` is set).

    With ``track=True`` every basis row remembers its combination of the
    added generators, so memberships come with coefficients.
    """

    def __init__(self, dim: int, modulus: Optional[int] = None, track: bool = False) -> None:
        if modulus is not None and not is_prime(modulus):
            raise ZModuleError(f"{modulus} is not prime")
        self.dim = dim
        self.p = modulus
        self.track = track
        self._unit: Dict[int, Vec] = {}
        self._ucombo: Dict[int, Vec] = {}
        self._hard: List[Tuple[Vec, Vec]] = []
        self._general: Optional[Dict[int, Tuple[Vec, Vec]]] = {}
        self._kernel: List[Vec] = []
        self.ngens = 0

    # -- building ------------------------------------------------------------

    def _normalize(self, vec: Vec) -> Vec:
        if self.p is None:
            return {k: v for k, v in vec.items() if v}
        p = self.p
        return {k: v % p for k, v in vec.items() if v % p}

    def _reduce_unit(self, vec: Vec, combo: Optional[Vec]) -> None:
        unit = self._unit
        hits = [c for c in vec if c in unit]
        p = self.p
        for c in hits:
            q = vec[c]
            if p is None:
                _axpy(vec, unit[c], -q)
                if combo is not None:
                    _axpy(combo, self._ucombo[c], -q)
            else:
                _axpy_mod(vec, unit[c], -q, p)
                if combo is not None:
                    _axpy_mod(combo, self._ucombo[c], -q, p)

    def _unit_pivot(self, vec: Vec) -> Optional[int]:
        if self.p is not None:
            return min(vec)
        best = None
        for k, v in vec.items():
            if (v == 1 or v == -1) and (best is None or k < best):
                best = k
        return best

    def _install_unit(self, c: int, vec: Vec, combo: Optional[Vec]) -> None:
        p = self.p
        s = vec[c]
        if p is None:
            if s == -1:
                vec = {k: -v for k, v in vec.items()}
                if combo is not None:
                    combo = {k: -v for k, v in combo.items()}
        elif s != 1:
            inv = pow(s, -1, p)
            vec = {k: v * inv % p for k, v in vec.items()}
            if combo is not None:
                combo = {k: v * inv % p for k, v in combo.items()}
        for piv, row in self._unit.items():
            t = row.get(c)
            if t:
                if p is None:
                    _axpy(row, vec, -t)
                    if combo is not None:
                        _axpy(self._ucombo[piv], combo, -t)
                else:
                    _axpy_mod(row, vec, -t, p)
                    if combo is not None:
                        _axpy_mod(self._ucombo[piv], combo, -t, p)
        self._unit[c] = vec
        if combo is not None:
            self._ucombo[c] = combo

    def add(self, vec: Vec) -> int:
        """Add a generator; returns its index among the generators."""
        idx = self.ngens
        self.ngens += 1
        v = self._normalize(vec)
        combo = {idx: 1} if self.track else None
        self._absorb(v, combo)
        return idx

    def extend(self, vecs: Iterable[Vec]) -> None:
        for v in vecs:
            self.add(v)

    def _absorb(self, v: Vec, combo: Optional[Vec]) -> None:
        if self._general:
            # new unit rows would break the general part; rebuild it lazily
            self._hard.extend(self._general.values())
        self._general = None
        self._reduce_unit(v, combo)
        if not v:
            if combo is not None:
                self._kernel.append(combo)
            return
        c = self._unit_pivot(v)
        if c is None:
            self._hard.append((v, combo if combo is not None else {}))
        else:
            self._install_unit(c, v, combo)

    def _finalize(self) -> Dict[int, Tuple[Vec, Vec]]:
        if self._general is not None:
            return self._general
        tracking = self.track
        pending = self._hard
        self._hard = []
        # promote residuals that acquire a unit entry; repeat until stable
        changed = True
        while changed and pending:
            changed = False
            rest = []
            for v, combo in pending:
                self._reduce_unit(v, combo if tracking else None)
                if not v:
                    if tracking:
                        self._kernel.append(combo)
                    continue
                c = self._unit_pivot(v)
                if c is None:
                    rest.append((v, combo))
                else:
                    self._install_unit(c, v, combo if tracking else None)
                    changed = True
            pending = rest
        general: Dict[int, Tuple[Vec, Vec]] = {}
        for v, combo in pending:
            self._reduce_unit(v, combo if tracking else None)
            self._insert_general(general, v, combo)
        self._general = general
        return general

    def _insert_general(self, general: Dict[int, Tuple[Vec, Vec]], vec: Vec, combo: Vec) -> None:
        tracking = self.track
        while vec:
            c = min(vec)
            if c not in general:
                if vec[c] < 0:
                    vec = _scaled(vec, -1)
                    combo = _scaled(combo, -1)
                general[c] = (vec, combo)
                return
            row, rcombo = general[c]
            a, b = row[c], vec[c]
            if b % a == 0:
                q = b // a
                _axpy(vec, row, -q)
                if tracking:
                    _axpy(combo, rcombo, -q)
                continue
            g, x, y = xgcd(a, b)
            new_row = _lin2(row, x, vec, y)
            new_vec = _lin2(vec, a // g, row, -(b // g))
            if tracking:
                new_rc = _lin2(rcombo, x, combo, y)
                combo = _lin2(combo, a // g, rcombo, -(b // g))
                rcombo = new_rc
            general[c] = (new_row, rcombo)
            vec = new_vec
        if tracking:
            self._kernel.append(combo)

    # -- queries -----------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self._unit) + len(self._finalize())

    def basis(self) -> List[Vec]:
        general = self._finalize()
        return [dict(v) for v in self._unit.values()] + [dict(v) for v, _ in general.values()]

    def reduce(self, target: Vec) -> Tuple[Vec, Optional[Vec]]:
        """Reduce ``target``; returns (residue, coefficients or None).

        The residue is empty iff ``target`` lies in the span.  With tracking
        enabled the coefficients express ``target - residue`` in the
        generators (only meaningful when the residue is empty).
        """
        general = self._finalize()
        p = self.p
        t = self._normalize(target)
        sol: Optional[Vec] = {} if self.track else None
        unit = self._unit
        for c in [c for c in t if c in unit]:
            q = t[c]
            if p is None:
                _axpy(t, unit[c], -q)
                if sol is not None:
                    _axpy(sol, self._ucombo[c], q)
            else:
                _axpy_mod(t, unit[c], -q, p)
                if sol is not None:
                    _axpy_mod(sol, self._ucombo[c], q, p)
        if p is None:
            residue: Vec = {}
            while t:
                c = min(t)
                entry = general.get(c)
                if entry is None or t[c] % entry[0][c]:
                    # cannot clear this coordinate: park it in the residue
                    residue[c] = t.pop(c)
                    continue
                row, rcombo = entry
                q = t[c] // row[c]
                _axpy(t, row, -q)
                if sol is not None:
                    _axpy(sol, rcombo, q)
            return residue, sol
        return t, sol

    def contains(self, target: Vec) -> bool:
        residue, _ = self.reduce(target)
        return not residue

    def __contains__(self, target: Vec) -> bool:
        return self.contains(target)

    def solve(self, target: Vec) -> Optional[Vec]:
        """Coefficients (generator index -> int) hitting ``target``, or None."""
        if not self.track:
            raise ZModuleError("solve() needs a Lattice built with track=True")
        residue, sol = self.reduce(target)
        if residue:
            return None
        return sol

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(v) for v in other.basis())

    def kernel_combos(self) -> List[Vec]:
        """Relations among generators found so far (tracking only)."""
        self._finalize()
        return [dict(k) for k in self._kernel]

    def elementary_divisors(self) -> List[int]:
        """Nonzero invariant factors of the span, in divisibility order."""
        if self.p is not None:
            return [1] * len(self._unit)
        general = self._finalize()
        ones = [1] * len(self._unit)
        if not general:
            return ones
        coords = sorted({k for v, _ in general.values() for k in v})
        pos = {k: i for i, k in enumerate(coords)}
        dense = [[0] * len(general) for _ in coords]
        for j, (v, _) in enumerate(general.values()):
            for k, x in v.items():
                dense[pos[k]][j] = x
        d = smith_diagonal(dense)
        return ones + [x for x in d if x]

    def pivot_order(self) -> List[int]:
        """Coordinates with the unit pivots first (each group ascending).

        In this order the basis is already in echelon form, so the Hermite
        normal form relative to it is cheap to compute.
        """
        units = sorted(self._unit)
        seen = set(units)
        return units + [c for c in range(self.dim) if c not in seen]

    def canonical_basis(self, order: Optional[Sequence[int]] = None) -> List[Vec]:
        """The Hermite normal form basis: echelon by leading coordinate,
        positive pivots, and every other row reduced into [0, pivot) at
        each pivot coordinate.  Coordinates are compared in ``order``
        (default: natural).  For a fixed order two lattices are equal iff
        these agree."""
        basis = self.basis()
        if order is None:
            rows, _ = _canonical(basis, None, self.p)
            return rows
        pos = {c: i for i, c in enumerate(order)}
        if len(pos) != self.dim:
            raise ZModuleError("order must be a permutation of the coordinates")
        rows, _ = _canonical([{pos[k]: x for k, x in v.items()} for v in basis], None, self.p)
        return [{order[k]: x for k, x in r.items()} for r in rows]


def _canonical(vectors: List[Vec], combos: Optional[List[Vec]], p: Optional[int]) -> Tuple[List[Vec], Optional[List[Vec]]]:
    tracking = combos is not None
    ech: Dict[int, Tuple[Vec, Vec]] = {}
    kernel: List[Vec] = []
    for i, v in enumerate(vectors):
        vec = dict(v)
        combo = dict(combos[i]) if tracking else {}
        while vec:
            c = min(vec)
            if c not in ech:
                if p is None:
                    if vec[c] < 0:
                        vec = _scaled(vec, -1)
                        combo = _scaled(combo, -1)
                else:
                    inv = pow(vec[c], -1, p)
                    vec = {k: x * inv % p for k, x in vec.items()}
                    combo = {k: x * inv % p for k, x in combo.items()}
                ech[c] = (vec, combo)
                vec = {}
                combo = None  # type: ignore[assignment]
                break
            row, rc = ech[c]
            a, b = row[c], vec[c]
            if p is not None:
                q = b * pow(a, -1, p) % p
                _axpy_mod(vec, row, -q, p)
                if tracking:
                    _axpy_mod(combo, rc, -q, p)
            elif b % a == 0:
                q = b // a
                _axpy(vec, row, -q)
                if tracking:
                    _axpy(combo, rc, -q)
            else:
                g, x, y = xgcd(a, b)
                nr = _lin2(row, x, vec, y)
                nv = _lin2(vec, a // g, row, -(b // g))
                if tracking:
                    nrc = _lin2(rc, x, combo, y)
                    combo = _lin2(combo, a // g, rc, -(b // g))
                    rc = nrc
                ech[c] = (nr, rc)
                vec = nv
        if combo is not None and tracking:
            kernel.append(combo)
    leads = sorted(ech)
    rows = {c: ech[c][0] for c in leads}
    rcs = {c: ech[c][1] for c in leads}
    for idx, c in enumerate(leads):
        piv = rows[c][c]
        for c0 in leads[:idx]:
            t = rows[c0].get(c)
            if not t:
                continue
            q = t // piv if p is None else t * pow(piv, -1, p) % p
            if not q:
                continue
            if p is None:
                _axpy(rows[c0], rows[c], -q)
                if tracking:
                    _axpy(rcs[c0], rcs[c], -q)
            else:
                _axpy_mod(rows[c0], rows[c], -q, p)
                if tracking:
                    _axpy_mod(rcs[c0], rcs[c], -q, p)
    out = [rows[c] for c in leads]
    if not tracking:
        return out, None
    return out, [rcs[c] for c in leads] + kernel


# ---------------------------------------------------------------------------
# normal forms of explicit matrices


def hermite_normal_form(m: SparseIntMatrix) -> Tuple[SparseIntMatrix, List[List[int]]]:
    """Column Hermite normal form.

    Returns ``(H, U)`` with ``M U = H`` and ``U`` unimodular.  The nonzero
    columns of ``H`` come first, sorted by pivot row; each pivot is positive
    and the entries of earlier columns in a pivot's row lie in [0, pivot).
    """
    n = m.ncols
    combos = [{j: 1} for j in range(n)]
    rows, transform = _canonical(m.columns, combos, None)
    assert transform is not None
    h_cols = rows + [{} for _ in range(n - len(rows))]
    u = [[0] * n for _ in range(n)]
    for j, combo in enumerate(transform):
        for i, x in combo.items():
            u[i][j] = x
    return SparseIntMatrix(m.nrows, h_cols, m.row_labels), u


def hnf_columns(m: SparseIntMatrix) -> List[Vec]:
    """Just the canonical nonzero HNF columns (no transform)."""
    rows, _ = _canonical(m.columns, None, None)
    return rows


def smith_diagonal(a: Sequence[Sequence[int]]) -> List[int]:
    d, _, _ = smith_dense(a, transforms=False)
    k = min(len(d), len(d[0]) if d else 0)
    return [d[i][i] for i in range(k)]


def smith_dense(a: Sequence[Sequence[int]], transforms: bool = True):
    """Dense Smith normal form: returns (D, U, V) with U A V = D.

    ``U`` and ``V`` are None when ``transforms`` is False.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(r) for r in a]
    u = identity(m) if transforms else None
    v = identity(n) if transforms else None

    def row_op(i, k, q):  # row_i -= q row_k
        di, dk = d[i], d[k]
        for j in range(n):
            if dk[j]:
                di[j] -= q * dk[j]
        if u is not None:
            ui, uk = u[i], u[k]
            for j in range(m):
                if uk[j]:
                    ui[j] -= q * uk[j]

    def col_op(j, k, q):  # col_j -= q col_k
        for r in d:
            if r[k]:
                r[j] -= q * r[k]
        if v is not None:
            for r in v:
                if r[k]:
                    r[j] -= q * r[k]

    def swap_rows(i, k):
        d[i], d[k] = d[k], d[i]
        if u is not None:
            u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for r in d:
            r[j], r[k] = r[k], r[j]
        if v is not None:
            for r in v:
                r[j], r[k] = r[k], r[j]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = d[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            piv = d[t][t]
            dirty = False
            for i in range(t + 1, m):
                if d[i][t]:
                    row_op(i, t, d[i][t] // piv)
                    if d[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if d[t][j]:
                    col_op(j, t, d[t][j] // piv)
                    if d[t][j]:
                        dirty = True
            if dirty:
                # a smaller remainder appeared in row/column t: make it the pivot
                cand = [(abs(d[i][t]), i, t) for i in range(t + 1, m) if d[i][t]]
                cand += [(abs(d[t][j]), t, j) for j in range(t + 1, n) if d[t][j]]
                _, i, j = min(cand)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if d[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_op(t, bad, -1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            if u is not None:
                u[t] = [-x for x in u[t]]
    return d, u, v


# ---------------------------------------------------------------------------


@dataclass
class SnfReport:
    """Invariant factors of the column span of an ``nrows``-row matrix."""

    divisors: List[int]
    ambient_rank: int
    u: Optional[List[List[int]]] = None
    v: Optional[List[List[int]]] = None
    diagonal: Optional[List[List[int]]] = field(default=None, repr=False)

    @property
    def rank(self) -> int:
        return sum(1 for d in self.divisors if d)

    @property
    def torsion(self) -> List[int]:
        return [d for d in self.divisors if d > 1]

    @property
    def free_quotient_rank(self) -> int:
        return self.ambient_rank - self.rank

    def count(self, value: int) -> int:
        return sum(1 for d in self.divisors if d == value)

    def chain_ok(self) -> bool:
        nz = [d for d in self.divisors if d]
        if any(d < 0 for d in self.divisors):
            return False
        if any(self.divisors[i] == 0 and self.divisors[i + 1] != 0 for i in range(len(self.divisors) - 1)):
            return False
        return all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))

    def to_dict(self) -> dict:
        return {
            "divisors": _compress(self.divisors),
            "rank": self.rank,
            "torsion": _compress(self.torsion),
            "ambientRank": self.ambient_rank,
            "freeQuotientRank": self.free_quotient_rank,
        }


def _compress(ds: List[int]) -> Dict[str, int]:
    out: Dict[str, int] = {}
    for d in ds:
        out[str(d)] = out.get(str(d), 0) + 1
    return out


def smith_normal_form(m: SparseIntMatrix, transforms: Optional[bool] = None) -> SnfReport:
    """Smith normal form of ``m``.

    Small matrices (both dimensions <= 200) go through the dense routine
    and carry transforms; larger ones use the sparse lattice, which yields
    the divisors only.  The returned divisors have length min(rows, cols):
    the nonzero invariant factors followed by zeros.
    """
    small = m.nrows <= 200 and m.ncols <= 200
    if transforms is None:
        transforms = small
    k = min(m.nrows, m.ncols)
    if transforms:
        dense = m.to_dense()
        d, u, v = smith_dense(dense, transforms=True)
        divs = [d[i][i] for i in range(k)]
        return SnfReport(divs, m.nrows, u, v, d)
    lat = Lattice(m.nrows)
    lat.extend(m.columns)
    divs = lat.elementary_divisors()
    return SnfReport(divs + [0] * (k - len(divs)), m.nrows)


def lattice_snf(lat: Lattice) -> SnfReport:
    divs = lat.elementary_divisors()
    return SnfReport(divs, lat.dim)


def solve_over_z(span: SparseIntMatrix, target: Sequence[int] | Vec) -> Optional[List[int]]:
    """Integer coefficients c with span * c = target, or None.

    Any returned solution has been re-multiplied and checked.
    """
    t = _as_vec(target, span.nrows)
    lat = Lattice(span.nrows, track=True)
    lat.extend(span.columns)
    sol = lat.solve(t)
    if sol is None:
        return None
    coeffs = [sol.get(j, 0) for j in range(span.ncols)]
    _check_solution(span, coeffs, t, None)
    return coeffs


def solve_over_fp(p: int, span: SparseIntMatrix, target: Sequence[int] | Vec) -> Optional[List[int]]:
    """Coefficients in [0, p) with span * c = target mod p, or None."""
    if not is_prime(p):
        raise ZModuleError(f"{p} is not prime")
    t = _as_vec(target, span.nrows)
    lat = Lattice(span.nrows, modulus=p, track=True)
    lat.extend(span.columns)
    sol = lat.solve(t)
    if sol is None:
        return None
    coeffs = [sol.get(j, 0) % p for j in range(span.ncols)]
    _check_solution(span, coeffs, t, p)
    return coeffs


def _as_vec(target: Sequence[int] | Vec, n: int) -> Vec:
    if isinstance(target, dict):
        if any(k < 0 or k >= n for k in target):
            raise ZModuleError("target indexed outside the row set")
        return {k: v for k, v in target.items() if v}
    if len(target) != n:
        raise ZModuleError(f"target has length {len(target)}, expected {n}")
    return {i: v for i, v in enumerate(target) if v}


def _check_solution(span: SparseIntMatrix, coeffs: List[int], target: Vec, p: Optional[int]) -> None:
    acc: Vec = {}
    for j, c in enumerate(coeffs):
        if c:
            _axpy(acc, span.columns[j], c)
    if p is not None:
        acc = {k: v % p for k, v in acc.items() if v % p}
        target = {k: v % p for k, v in target.items() if v % p}
    if acc != target:
        raise AssertionError("solver produced coefficients that do not reproduce the target")


def span_equal_vectors(a: Iterable[Vec], b: Iterable[Vec], dim: int, modulus: Optional[int] = None) -> bool:
    la = Lattice(dim, modulus)
    la.extend(a)
    lb = Lattice(dim, modulus)
    lb.extend(b)
    return la.rank == lb.rank and la.contains_lattice(lb) and lb.contains_lattice(la)


def gcd_list(xs: Iterable[int]) -> int:
    g = 0
    for x in xs:
        g = math.gcd(g, x)
    return g


class DenseModP:
    """Row echelon basis over F_p for dense numpy rows (small p).

    Rows are kept fully reduced (zero at every other pivot), so reducing a
    batch is one int64 matrix product, exact while ncols * (p-1)^2 < 2^63.
    """

    def __init__(self, ncols: int, p: int) -> None:
        import numpy as np

        if not is_prime(p):
            raise ZModuleError(f"{p} is not prime")
        if ncols * (p - 1) ** 2 >= 2 ** 62:
            raise ZModuleError("matrix too wide for exact int64 products")
        self.np = np
        self.p = p
        self.ncols = ncols
        self.rows = np.zeros((0, ncols), dtype=np.int64)
        self.pivots: List[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, x):
        """Reduce a batch (2-d) or a single row (1-d) against the basis."""
        np = self.np
        x = np.asarray(x, dtype=np.int64) % self.p
        if not self.pivots:
            return x
        return (x - x[..., self.pivots] @ self.rows) % self.p

    def add_rows(self, batch, chunk: int = 2000) -> None:
        np = self.np
        batch = np.asarray(batch)
        for s in range(0, len(batch), chunk):
            x = self.reduce(batch[s:s + chunk])
            x = x[x.any(axis=1)]
            while len(x):
                r = x[0]
                c = int(np.flatnonzero(r)[0])
                r = r * pow(int(r[c]), -1, self.p) % self.p
                # keep the basis fully reduced at the new pivot
                if len(self.rows):
                    col = self.rows[:, c].copy()
                    self.rows = (self.rows - np.outer(col, r)) % self.p
                self.rows = np.vstack([self.rows, r])
                self.pivots.append(c)
                rest = x[1:]
                if len(rest):
                    col = rest[:, c].copy()
                    rest = (rest - np.outer(col, r)) % self.p
                    rest = rest[rest.any(axis=1)]
                x = rest

    def contains(self, row) -> bool:
        return not self.reduce(row).any()

