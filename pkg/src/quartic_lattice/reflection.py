"""Short vectors in definite lattices, reflections and bounded reflection orbits."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .lattice import (
    DegenerateLatticeError,
    DimensionError,
    GramLattice,
    LatticeError,
    LatticeVector,
    inertia,
    inner,
)

MIRROR_SQUARES = (-4, -2, -1, 1, 2, 4)


class MirrorError(LatticeError):
    """The vector does not define an integral reflection."""


class NotDefiniteError(LatticeError):
    pass


def check_mirror(L: GramLattice, a: Sequence[int]) -> int:
    """Return ``a^2`` if ``r_a`` is a well defined integral reflection, else raise."""
    if len(a) != L.rank:
        raise DimensionError("mirror has wrong length")
    s = inner(L, a, a)
    if s == 0:
        raise MirrorError("isotropic vector does not define a reflection")
    if s not in MIRROR_SQUARES:
        raise MirrorError(f"mirrors of square {s} are not supported")
    if abs(s) == 4:
        # r_a integral iff a = 0 mod 2L^vee, i.e. a.y even for every basis vector y
        if any(sum(g * ai for g, ai in zip(row, a)) % 2 for row in L.gram):
            raise MirrorError("square ±4 vector is not divisible by 2 in the dual lattice")
    return s


def reflect(L: GramLattice, a: Sequence[int], x: Sequence[int]) -> LatticeVector:
    s = check_mirror(L, a)
    if len(x) != L.rank:
        raise DimensionError("vector has wrong length")
    k = Fraction(2 * inner(L, x, a), s)
    assert k.denominator == 1, "integrality guaranteed by check_mirror"
    k = int(k)
    return tuple(xi - k * ai for xi, ai in zip(x, a))


@dataclass(frozen=True)
class ReflectionWord:
    """Mirrors applied left to right: ``r_{m_k} ... r_{m_1} (x)``."""

    mirrors: tuple[LatticeVector, ...] = ()

    def __len__(self):
        return len(self.mirrors)

    def then(self, mirror: Sequence[int]) -> "ReflectionWord":
        return ReflectionWord(self.mirrors + (tuple(mirror),))

    def apply(self, L: GramLattice, x: Sequence[int]) -> LatticeVector:
        x = tuple(x)
        for m in self.mirrors:
            x = reflect(L, m, x)
        return x

    def to_json(self) -> list[list[int]]:
        return [list(m) for m in self.mirrors]

    @classmethod
    def from_json(cls, data) -> "ReflectionWord":
        return cls(tuple(tuple(int(c) for c in m) for m in data))


def verify_word(L: GramLattice, seed: Sequence[int], word: ReflectionWord,
                target: Sequence[int]) -> bool:
    return word.apply(L, seed) == tuple(target)


def _canonical(v: LatticeVector) -> LatticeVector:
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


def orbit_bounded(L: GramLattice, generators: Sequence[Sequence[int]],
                  seeds: Iterable[Sequence[int]], depth: int) -> dict[LatticeVector, ReflectionWord]:
    """Images of the seeds under at most ``depth`` reflections, each with a word.

    Breadth first, so every returned word is a shortest one.  Vectors are
    deduplicated up to sign.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    gens = [tuple(g) for g in generators]
    for g in gens:
        check_mirror(L, g)
    found: dict[LatticeVector, ReflectionWord] = {}
    seen: set[LatticeVector] = set()
    queue: deque = deque()
    for s in seeds:
        s = tuple(s)
        if _canonical(s) not in seen:
            seen.add(_canonical(s))
            found[s] = ReflectionWord()
            queue.append((s, ReflectionWord()))
    while queue:
        x, word = queue.popleft()
        if len(word) == depth:
            continue
        for g in gens:
            y = reflect(L, g, x)
            key = _canonical(y)
            if key in seen:
                continue
            seen.add(key)
            w = word.then(g)
            found[y] = w
            queue.append((y, w))
    return found


# ---------------------------------------------------------------------------
# enumeration


def _ldl(Q: Sequence[Sequence]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """``x^T Q x = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2`` for positive definite Q."""
    n = len(Q)
    a = [[Fraction(x) for x in row] for row in Q]
    d = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        if d[i] <= 0:
            raise NotDefiniteError("form is not positive definite")
        for j in range(i + 1, n):
            mu[i][j] = a[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(i + 1, n):
                a[j][k] -= mu[i][j] * d[i] * mu[i][k]
    return d, mu


def short_vectors(Q: Sequence[Sequence[int]], bound: int, exact: bool = True,
                  allowed: Sequence[Callable[[int], bool] | None] | None = None) -> list[LatticeVector]:
    """All x with ``x^T Q x == bound`` (or ``<= bound`` if not exact), Q positive definite.

    Completed squares: the coordinates are fixed from the last one down, and
    each coordinate is confined to the interval on which the partial sum of
    squares stays within ``bound``.  ``allowed[i]``, when given, further
    filters the values of coordinate ``i`` (used for box and parity
    restrictions).  Output is sorted.
    """
    n = len(Q)
    if n == 0:
        return [()] if (bound == 0 or not exact and bound >= 0) else []
    d, mu = _ldl(Q)
    allowed = allowed or [None] * n
    x = [0] * n
    out: list[LatticeVector] = []

    def rec(i: int, remaining: Fraction):
        c = sum((mu[i][j] * x[j] for j in range(i + 1, n) if x[j]), Fraction(0))
        r = remaining / d[i]
        root = math.sqrt(float(r)) if r > 0 else 0.0
        lo = math.floor(float(-c) - root) - 1
        hi = math.ceil(float(-c) + root) + 1
        ok = allowed[i]
        for v in range(lo, hi + 1):
            t = v + c
            left = remaining - d[i] * t * t
            if left < 0:
                continue
            if ok is not None and not ok(v):
                continue
            x[i] = v
            if i == 0:
                if not exact or left == 0:
                    out.append(tuple(x))
            else:
                rec(i - 1, left)
        x[i] = 0

    rec(n - 1, Fraction(bound))
    out.sort()
    return out


def is_negative_definite(L: GramLattice) -> bool:
    pos, neg, zero = inertia(L.gram)
    return neg == L.rank


def vectors_of_square(L: GramLattice, s: int,
                      allowed: Sequence[Callable[[int], bool] | None] | None = None) -> list[LatticeVector]:
    """Every vector of square ``s < 0`` in a negative definite lattice, sorted."""
    if s >= 0:
        raise LatticeError("only negative squares are enumerated")
    pos, neg, zero = inertia(L.gram)
    if zero:
        raise DegenerateLatticeError("degenerate lattice")
    if pos:
        raise NotDefiniteError("lattice is not negative definite")
    Q = [[-g for g in row] for row in L.gram]
    return short_vectors(Q, -s, exact=True, allowed=allowed)


def roots(L: GramLattice) -> list[LatticeVector]:
    return vectors_of_square(L, -2)


def box_scan(L: GramLattice, s: int, box: int) -> list[LatticeVector]:
    """Naive scan of ``[-box, box]^rank`` for vectors of square ``s`` (test oracle)."""
    import itertools

    out = []
    for x in itertools.product(range(-box, box + 1), repeat=L.rank):
        if inner(L, x, x) == s:
            out.append(tuple(x))
    return out
