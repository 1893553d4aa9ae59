"""Exact integral lattices given by Gram matrices.

Everything here works with Python integers and :class:`fractions.Fraction`,
so there is no overflow and no rounding.  Vectors are tuples of coordinates
with respect to the (implicit) basis of the lattice.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod
from typing import Iterable, Sequence

IntMatrix = list[list[int]]
LatticeVector = tuple[int, ...]
RationalVector = tuple[Fraction, ...]


class LatticeError(ValueError):
    """Invalid input to a lattice operation."""


class DimensionError(LatticeError):
    pass


class DegenerateLatticeError(LatticeError):
    """Raised by operations that need a nondegenerate form."""


# ---------------------------------------------------------------------------
# small exact matrix helpers


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(m: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def vecmat(v: Sequence, m: Sequence[Sequence]) -> list:
    n = len(m[0]) if m else 0
    out = [0] * n
    for vi, row in zip(v, m):
        if vi:
            for j, x in enumerate(row):
                out[j] += vi * x
    return out


def det(m: Sequence[Sequence]) -> Fraction | int:
    """Determinant by fraction-free (Bareiss) elimination.

    Integer input gives an ``int``; rational input a ``Fraction``.
    """
    n = len(m)
    if n == 0:
        return 1
    if any(isinstance(x, Fraction) for row in m for x in row):
        denom = 1
        for row in m:
            for x in row:
                denom = denom * Fraction(x).denominator // gcd(denom, Fraction(x).denominator)
        scaled = [[int(Fraction(x) * denom) for x in row] for row in m]
        return Fraction(det(scaled), denom**n)
    a = [list(map(int, row)) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rational_inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise DegenerateLatticeError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def rank(m: Sequence[Sequence]) -> int:
    """Rank over the rationals."""
    a = [[Fraction(x) for x in row] for row in m]
    r = 0
    ncols = len(a[0]) if a else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, len(a)):
            if a[i][col]:
                f = a[i][col] / a[r][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def rank_mod2(rows: Iterable[Sequence[int]]) -> int:
    """Rank of an integer matrix reduced modulo 2."""
    pivots: dict[int, int] = {}
    r = 0
    for row in rows:
        v = sum(1 << i for i, x in enumerate(row) if x % 2)
        while v:
            top = v.bit_length() - 1
            if top in pivots:
                v ^= pivots[top]
            else:
                pivots[top] = v
                r += 1
                break
    return r


# ---------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class GramLattice:
    gram: tuple[tuple[int, ...], ...]
    _det: int = field(init=False, repr=False, compare=False)

    def __init__(self, gram: Iterable[Iterable[int]]):
        g = tuple(tuple(int(x) for x in row) for row in gram)
        n = len(g)
        if any(len(row) != n for row in g):
            raise DimensionError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise LatticeError(f"Gram matrix not symmetric at ({i}, {j})")
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "_det", det(g))

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> int:
        return self._det

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @property
    def is_nondegenerate(self) -> bool:
        return self._det != 0

    def inner(self, x: Sequence, y: Sequence):
        return inner(self, x, y)

    def norm(self, x: Sequence):
        return inner(self, x, x)

    def gram_of(self, vectors: Sequence[Sequence]) -> list[list]:
        """Gram matrix of the given vectors (rows) under this form."""
        return [[inner(self, x, y) for y in vectors] for x in vectors]

    def to_json(self) -> dict:
        return {"rank": self.rank, "gram": [list(r) for r in self.gram]}

    @classmethod
    def from_json(cls, data: dict) -> "GramLattice":
        lat = cls(data["gram"])
        if data.get("rank", lat.rank) != lat.rank:
            raise DimensionError("'rank' does not match Gram matrix size")
        return lat


def inner(L: GramLattice, x: Sequence, y: Sequence):
    """Bilinear form ``x^T G y``; works for integer and rational coordinates."""
    n = L.rank
    if len(x) != n or len(y) != n:
        raise DimensionError(f"vectors of length {len(x)}, {len(y)} in a rank-{n} lattice")
    total = 0
    for i, xi in enumerate(x):
        if xi:
            row = L.gram[i]
            total += xi * sum(g * yj for g, yj in zip(row, y) if yj)
    return total


# E8 diagram: chain e1-e2-e3-e5-e6-e7-e8, with e4 attached to e3 (0-based below).
_E8_EDGES = [(0, 1), (1, 2), (2, 4), (4, 5), (5, 6), (6, 7), (2, 3)]


def _root_lattice(n: int, edges: Iterable[tuple[int, int]]) -> GramLattice:
    g = [[-2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in edges:
        g[i][j] = g[j][i] = 1
    return GramLattice(g)


def standard(name: str, n: int | None = None) -> GramLattice:
    """Named lattice: ``A<p>``, ``D<q>``, ``E6``/``E7``/``E8``, ``U`` or ``rank1``.

    Root lattices are negative definite (roots have square -2).  The rank of
    ``A``/``D`` may be given in the name (``"A3"``) or as ``n``; ``rank1``
    takes the value of its single Gram entry as ``n``.
    """
    m = re.fullmatch(r"([A-Za-z]+?)(\d*)", name.strip())
    if m is None:
        raise LatticeError(f"unknown lattice name {name!r}")
    family, digits = m.group(1), m.group(2)
    if digits:
        if n is not None and n != int(digits):
            raise LatticeError(f"conflicting parameters for {name!r}")
        n = int(digits)
    if family == "U":
        return GramLattice([[0, 1], [1, 0]])
    if family == "rank":
        # "rank1" parses as family "rank", digits "1"
        raise LatticeError("use standard('rank1', n)")
    if family == "A":
        if n is None or n < 1:
            raise LatticeError("A_p needs p >= 1")
        return _root_lattice(n, [(i, i + 1) for i in range(n - 1)])
    if family == "D":
        if n is None or n < 4:
            raise LatticeError("D_q needs q >= 4")
        return _root_lattice(n, [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)])
    if family == "E":
        if n not in (6, 7, 8):
            raise LatticeError("E_n needs n in {6, 7, 8}")
        return _root_lattice(n, [e for e in _E8_EDGES if max(e) < n])
    raise LatticeError(f"unknown lattice name {name!r}")


def rank1(n: int) -> GramLattice:
    """The rank one lattice ``[n]``."""
    return GramLattice([[n]])


def rescale(L: GramLattice, d: int) -> GramLattice:
    if d == 0:
        raise LatticeError("rescaling factor must be nonzero")
    return GramLattice([[d * x for x in row] for row in L.gram])


def direct_sum(*lattices: GramLattice) -> GramLattice:
    n = sum(L.rank for L in lattices)
    g = [[0] * n for _ in range(n)]
    off = 0
    for L in lattices:
        for i, row in enumerate(L.gram):
            g[off + i][off:off + L.rank] = row
        off += L.rank
    return GramLattice(g)


def multiple(L: GramLattice, k: int) -> GramLattice:
    """``k`` orthogonal copies of ``L`` (``kL`` in the usual notation)."""
    return direct_sum(*([L] * k))


def conjugate(L: GramLattice, basis: Sequence[Sequence[int]]) -> GramLattice:
    """Form restricted to the sublattice spanned by the rows of ``basis``."""
    return GramLattice(matmul(matmul(basis, L.gram), transpose(basis)))


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    """``left @ M @ right == diag(diagonal)`` (padded with zeros to M's shape).

    ``right_inverse`` is the integer inverse of ``right``; its first rows span
    the saturation of the row space of ``M``.
    """

    diagonal: tuple[int, ...]
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]
    right_inverse: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_normal_form(M: Sequence[Sequence[int]]) -> SmithForm:
    a = [list(map(int, row)) for row in M]
    m = len(a)
    n = len(a[0]) if m else 0
    left = identity(m)
    right = identity(n)
    rinv = identity(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]
        rinv[i], rinv[j] = rinv[j], rinv[i]

    def add_row(src, dst, q):  # row dst += q * row src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + q * y for x, y in zip(left[dst], left[src])]

    def add_col(src, dst, q):  # col dst += q * col src
        for row in a:
            row[dst] += q * row[src]
        for row in right:
            row[dst] += q * row[src]
        # inverse: row src of rinv -= q * row dst
        rinv[src] = [x - q * y for x, y in zip(rinv[src], rinv[dst])]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if t < m and t < n and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
    diag = tuple(a[i][i] for i in range(min(m, n)))
    return SmithForm(diag, tuple(map(tuple, left)), tuple(map(tuple, right)),
                     tuple(map(tuple, rinv)))


def _common_denominator(vectors: Iterable[Sequence]) -> int:
    d = 1
    for v in vectors:
        for x in v:
            q = Fraction(x).denominator
            d = d * q // gcd(d, q)
    return d


def span_basis(vectors: Sequence[Sequence]) -> list[RationalVector]:
    """A basis of the abelian group generated by the given rational vectors."""
    vectors = list(vectors)
    if not vectors:
        return []
    den = _common_denominator(vectors)
    M = [[int(Fraction(x) * den) for x in v] for v in vectors]
    snf = smith_normal_form(M)
    out = []
    for d, row in zip(snf.diagonal, snf.right_inverse):
        if d:
            out.append(tuple(Fraction(d * x, den) for x in row))
    return out


def saturation(vectors: Sequence[Sequence[int]]) -> list[LatticeVector]:
    """Basis of the primitive hull ``(span ⊗ Q) ∩ Z^n`` of integer vectors."""
    vectors = [list(map(int, v)) for v in vectors]
    if not vectors:
        return []
    snf = smith_normal_form(vectors)
    return [tuple(snf.right_inverse[i]) for i in range(snf.rank)]


def solve_in_basis(basis: Sequence[Sequence], v: Sequence) -> RationalVector | None:
    """Rational coefficients ``c`` with ``c @ basis == v``, or None if v is outside the span."""
    rows = [list(map(Fraction, b)) for b in basis]
    k = len(rows)
    n = len(v)
    # solve basis^T c = v by elimination on the augmented system
    a = [[rows[j][i] for j in range(k)] + [Fraction(v[i])] for i in range(n)]
    piv_cols = []
    r = 0
    for col in range(k):
        piv = next((i for i in range(r, n) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][col]
        a[r] = [x / p for x in a[r]]
        for i in range(n):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(col)
        r += 1
    if any(a[i][k] != 0 for i in range(r, n)):
        return None
    c = [Fraction(0)] * k
    for i, col in enumerate(piv_cols):
        c[col] = a[i][k]
    return tuple(c)


# ---------------------------------------------------------------------------
# inertia


def inertia(M: Sequence[Sequence]) -> tuple[int, int, int]:
    """``(positive, negative, zero)`` inertia of a symmetric rational matrix.

    Symmetric Gaussian elimination with exact pivots; when every remaining
    diagonal entry vanishes, a 2x2 block ``[[0, b], [b, 0]]`` (one positive,
    one negative direction) is split off instead.
    """
    a = [[Fraction(x) for x in row] for row in M]
    pos = neg = 0
    while a:
        n = len(a)
        k = next((i for i in range(n) if a[i][i] != 0), None)
        if k is not None:
            p = a[k][k]
            if p > 0:
                pos += 1
            else:
                neg += 1
            rest = [i for i in range(n) if i != k]
            a = [[a[i][j] - a[i][k] * a[k][j] / p for j in rest] for i in rest]
            continue
        pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if a[i][j] != 0), None)
        if pair is None:
            return pos, neg, n
        i, j = pair
        b = a[i][j]
        pos += 1
        neg += 1
        # block A = [[0, b], [b, 0]], A^{-1} = [[0, 1/b], [1/b, 0]]
        rest = [r for r in range(n) if r not in pair]
        a = [[a[r][s] - (a[r][i] * a[j][s] + a[r][j] * a[i][s]) / b for s in rest]
             for r in rest]
    return pos, neg, 0


def signature(L: GramLattice) -> tuple[int, int]:
    pos, neg, zero = inertia(L.gram)
    if zero:
        raise DegenerateLatticeError(f"form has a {zero}-dimensional kernel")
    return pos, neg


# ---------------------------------------------------------------------------
# discriminant forms


@dataclass(frozen=True)
class DiscriminantForm:
    """The finite quadratic form on ``L^vee / L``.

    ``orders`` are the nontrivial invariant factors; ``generators`` are
    elements of ``L^vee`` (rational coordinates in the basis of L) of those
    orders.  Group elements are tuples ``(k_1, ..., k_r)`` with
    ``0 <= k_i < orders[i]``.  ``q`` values live in Q/2Z and ``b`` in Q/Z,
    both normalized to ``[0, 2)`` and ``[0, 1)``.
    """

    orders: tuple[int, ...]
    generators: tuple[RationalVector, ...]
    gram_q: tuple[Fraction, ...]            # q(g_i) mod 2
    gram_b: tuple[tuple[Fraction, ...], ...]  # b(g_i, g_j) mod 1

    @property
    def order(self) -> int:
        return prod(self.orders)

    def elements(self):
        return itertools.product(*(range(d) for d in self.orders))

    def q(self, x: Sequence[int]) -> Fraction:
        total = Fraction(0)
        r = len(self.orders)
        for i in range(r):
            if x[i]:
                total += x[i] * x[i] * self.gram_q[i]
                for j in range(i + 1, r):
                    if x[j]:
                        total += 2 * x[i] * x[j] * self.gram_b[i][j]
        return total % 2

    def b(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        total = Fraction(0)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj:
                        total += xi * yj * self.gram_b[i][j]
        return total % 1

    def add(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders))

    def scale(self, k: int, x: Sequence[int]) -> tuple[int, ...]:
        return tuple((k * a) % d for a, d in zip(x, self.orders))

    def element_order(self, x: Sequence[int]) -> int:
        o = 1
        for a, d in zip(x, self.orders):
            if a:
                e = d // gcd(a, d)
                o = o * e // gcd(o, e)
        return o

    def vector(self, x: Sequence[int]) -> RationalVector:
        """A representative of the class in ``L^vee``."""
        n = len(self.generators[0]) if self.generators else 0
        out = [Fraction(0)] * n
        for k, g in zip(x, self.generators):
            if k:
                out = [o + k * gi for o, gi in zip(out, g)]
        return tuple(out)


def dual_basis(L: GramLattice) -> list[RationalVector]:
    if not L.is_nondegenerate:
        raise DegenerateLatticeError("degenerate lattice has no dual in L ⊗ Q")
    return [tuple(row) for row in rational_inverse(L.gram)]


def discriminant_form(L: GramLattice) -> DiscriminantForm:
    if not L.is_nondegenerate:
        raise DegenerateLatticeError("discriminant form of a degenerate lattice")
    snf = smith_normal_form(L.gram)
    gens, orders = [], []
    for i, d in enumerate(snf.diagonal):
        if d > 1:
            orders.append(d)
            gens.append(tuple(Fraction(snf.right[r][i], d) for r in range(L.rank)))
    gq = tuple(inner(L, g, g) % 2 for g in gens)
    gb = tuple(tuple(inner(L, g, h) % 1 for h in gens) for g in gens)
    return DiscriminantForm(tuple(orders), tuple(gens), gq, gb)


BRUTE_FORCE_LIMIT = 4096


class GroupTooLargeError(LatticeError):
    pass


def _profile(F: DiscriminantForm):
    counts: dict = {}
    for x in F.elements():
        key = (F.element_order(x), F.q(x))
        counts[key] = counts.get(key, 0) + 1
    return counts


def finite_quadratic_forms_isomorphic(F1: DiscriminantForm, F2: DiscriminantForm) -> bool:
    """Decide whether two finite quadratic forms are isomorphic by search.

    Images of the generators of ``F1`` are chosen one at a time among
    elements of ``F2`` of the same order and ``q``-value, subject to the
    pairings with earlier images and to the images generating a subgroup of
    the expected size.  A surviving full assignment is an isomorphism.
    """
    for F in (F1, F2):
        if F.order > BRUTE_FORCE_LIMIT:
            raise GroupTooLargeError(f"group of order {F.order} exceeds {BRUTE_FORCE_LIMIT}")
    if F1.order != F2.order:
        return False
    if _profile(F1) != _profile(F2):
        return False
    r = len(F1.orders)
    if r == 0:
        return True
    elems2 = list(F2.elements())
    candidates = []
    for i in range(r):
        d, qv = F1.orders[i], F1.gram_q[i]
        candidates.append([y for y in elems2 if F2.element_order(y) == d and F2.q(y) == qv])
    zero = tuple(0 for _ in F2.orders)

    def extend(sub: frozenset, y, d) -> frozenset:
        out = set()
        step = zero
        for _ in range(d):
            out.update(F2.add(s, step) for s in sub)
            step = F2.add(step, y)
        return frozenset(out)

    images: list = []

    def search(i: int, sub: frozenset) -> bool:
        if i == r:
            return True
        expected = len(sub) * F1.orders[i]
        for y in candidates[i]:
            if any(F2.b(y, images[j]) != F1.gram_b[i][j] for j in range(i)):
                continue
            if y in sub:
                continue
            new = extend(sub, y, F1.orders[i])
            if len(new) != expected:
                continue
            images.append(y)
            if search(i + 1, new):
                return True
            images.pop()
        return False

    return search(0, frozenset([zero]))


# ---------------------------------------------------------------------------
# serialization of rationals


def fraction_to_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_fraction(s) -> Fraction:
    if isinstance(s, bool):
        raise LatticeError("booleans are not rationals")
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise LatticeError(f"bad rational {s!r}") from exc
    raise LatticeError(f"rationals are serialized as strings, got {type(s).__name__}")


def rational_vector_to_json(v: Sequence) -> list[str]:
    return [fraction_to_str(x) for x in v]


def rational_vector_from_json(data: Sequence) -> RationalVector:
    return tuple(parse_fraction(x) for x in data)
