"""A concrete period lattice for real quartics whose real part is two nested spheres.

The model is ``L = E8 + E8 + U + U + U`` (22 coordinates: first E8, second
E8, then three hyperbolic planes).  The involution ``c``

* swaps the two E8 summands,
* is the identity on the first U,
* acts on the second and third U by ``u1 -> -u2``, ``u2 -> -u1``.

Then the invariant lattice is ``E8(2) + 2A1 + U`` with basis
``e_i = (f_i, f_i)``, ``v_k = u1 - u2`` (second/third U), ``u1, u2`` (first
U); the anti-invariant lattice is ``E8(2) + 2A1(-1)`` with basis
``e'_i = (f_i, -f_i)``, ``v'_k = u1 + u2``; and ``h = v'_1 + v'_2``.
Matching basis vectors sum into ``2L``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Mapping, Sequence

from .lattice import (
    GramLattice,
    LatticeError,
    LatticeVector,
    conjugate,
    direct_sum,
    inner,
    rank_mod2,
    signature,
    solve_in_basis,
    standard,
)
from .reflection import orbit_bounded, reflect, vectors_of_square

RANK = 22
E8_A, E8_B, U1, U2, U3 = 0, 8, 16, 18, 20

PLUS_NAMES = ("e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8", "v1", "v2", "u1", "u2")
MINUS_NAMES = ("e1'", "e2'", "e3'", "e4'", "e5'", "e6'", "e7'", "e8'", "v1'", "v2'")

# coefficients of e_1^* and e_8^* on e_1..e_8 (e_8^* is minus the highest root)
E1_STAR = (-4, -7, -10, -5, -8, -6, -4, -2)
E8_STAR = (-2, -4, -6, -3, -5, -4, -3, -2)

FIGURE1_NAMES = tuple(f"e{i}" for i in range(14))


class EigenlatticeError(LatticeError):
    """A vector is not in the eigenlattice an operation requires."""


def _unit(i: int) -> list[int]:
    v = [0] * RANK
    v[i] = 1
    return v


def _add(*terms: tuple[int, Sequence[int]]) -> LatticeVector:
    out = [0] * RANK
    for k, v in terms:
        for i, x in enumerate(v):
            out[i] += k * x
    return tuple(out)


def is_zero_mod2(x: Sequence[int]) -> bool:
    return all(c % 2 == 0 for c in x)


@dataclass(frozen=True)
class PeriodLattice:
    L: GramLattice
    c: tuple[tuple[int, ...], ...]
    h: LatticeVector
    plus_basis: tuple[LatticeVector, ...]
    minus_basis: tuple[LatticeVector, ...]

    def apply_c(self, x: Sequence[int]) -> LatticeVector:
        return tuple(sum(r * xi for r, xi in zip(row, x)) for row in self.c)

    def inner(self, x, y):
        return inner(self.L, x, y)

    def norm(self, x):
        return inner(self.L, x, x)

    def in_plus(self, x) -> bool:
        return self.apply_c(x) == tuple(x)

    def in_minus(self, x) -> bool:
        return self.apply_c(x) == tuple(-a for a in x)

    def congruent_mod2(self, x, y) -> bool:
        """``x = y mod 2L``."""
        return is_zero_mod2([a - b for a, b in zip(x, y)])

    def from_plus(self, coords: Sequence[int]) -> LatticeVector:
        return _add(*zip(coords, self.plus_basis))

    def from_minus(self, coords: Sequence[int]) -> LatticeVector:
        return _add(*zip(coords, self.minus_basis))

    def plus_coords(self, x) -> tuple[Fraction, ...] | None:
        return solve_in_basis(self.plus_basis, x)

    def minus_coords(self, x) -> tuple[Fraction, ...] | None:
        return solve_in_basis(self.minus_basis, x)

    def plus_int_coords(self, x) -> tuple[int, ...]:
        c = self.plus_coords(x)
        if c is None or any(a.denominator != 1 for a in c):
            raise EigenlatticeError("vector is not in L^c_+")
        return tuple(int(a) for a in c)

    def reflect(self, a, x) -> LatticeVector:
        """Reflection of ``x`` against ``a``, both in L^c_+, computed inside L^c_+.

        Walls of square -4 are only divisible by 2 in the dual of L^c_+, not
        in the dual of L, so the reflection does not extend by the same
        formula to all of L.
        """
        y = reflect(self.plus_lattice, self.plus_int_coords(a), self.plus_int_coords(x))
        return self.from_plus(y)

    @cached_property
    def plus_lattice(self) -> GramLattice:
        return conjugate(self.L, self.plus_basis)

    @cached_property
    def minus_lattice(self) -> GramLattice:
        return conjugate(self.L, self.minus_basis)


def _check_period_lattice(P: PeriodLattice) -> None:
    L, h = P.L, P.h
    basis = [_unit(i) for i in range(RANK)]
    images = [P.apply_c(b) for b in basis]
    assert all(P.apply_c(y) == tuple(b) for y, b in zip(images, basis)), "c^2 != 1"
    assert L.gram_of(images) == [list(r) for r in L.gram], "c is not an isometry"
    assert all(P.in_plus(v) for v in P.plus_basis)
    assert all(P.in_minus(v) for v in P.minus_basis)
    expected_plus = direct_sum(_e8_2(), standard("A1"), standard("A1"), standard("U"))
    expected_minus = direct_sum(_e8_2(), _a1_neg(), _a1_neg())
    assert P.plus_lattice == expected_plus
    assert P.minus_lattice == expected_minus
    for p, m in zip(P.plus_basis, P.minus_basis):
        assert is_zero_mod2([a + b for a, b in zip(p, m)]), "matched pair not in 2L"
    v1, v2 = P.plus_basis[8], P.plus_basis[9]
    assert h == _add((1, P.minus_basis[8]), (1, P.minus_basis[9]))
    assert P.congruent_mod2(h, _add((1, v1), (1, v2)))
    assert P.in_minus(h) and inner(L, h, h) == 4
    assert signature(P.plus_lattice)[0] == 1, "invariant lattice must be hyperbolic"


def _e8_2() -> GramLattice:
    return GramLattice([[2 * x for x in row] for row in standard("E8").gram])


def _a1_neg() -> GramLattice:
    return GramLattice([[2]])


@lru_cache(maxsize=None)
def build_period_lattice() -> PeriodLattice:
    E8, U = standard("E8"), standard("U")
    L = direct_sum(E8, E8, U, U, U)
    cols = []
    for j in range(RANK):
        if j < 8:
            img = _unit(E8_B + j)
        elif j < 16:
            img = _unit(j - 8)
        elif j < U2:
            img = _unit(j)
        else:
            base = U2 if j < U3 else U3
            other = base + 1 - (j - base)
            img = [-x for x in _unit(other)]
        cols.append(img)
    c = tuple(tuple(cols[j][i] for j in range(RANK)) for i in range(RANK))
    f = [_unit(i) for i in range(8)]
    g = [_unit(E8_B + i) for i in range(8)]
    plus = [_add((1, f[i]), (1, g[i])) for i in range(8)]
    plus += [_add((1, _unit(U2)), (-1, _unit(U2 + 1))),
             _add((1, _unit(U3)), (-1, _unit(U3 + 1))),
             tuple(_unit(U1)), tuple(_unit(U1 + 1))]
    minus = [_add((1, f[i]), (-1, g[i])) for i in range(8)]
    minus += [_add((1, _unit(U2)), (1, _unit(U2 + 1))),
              _add((1, _unit(U3)), (1, _unit(U3 + 1)))]
    h = _add((1, minus[8]), (1, minus[9]))
    P = PeriodLattice(L, c, h, tuple(plus), tuple(minus))
    _check_period_lattice(P)
    return P


# ---------------------------------------------------------------------------
# the fundamental polyhedron e0..e13


def figure1_plus_coordinates() -> dict[str, tuple[int, ...]]:
    """The walls e0..e13 of the fundamental polyhedron, in invariant-lattice coordinates."""
    def vec(e=(0,) * 8, v1=0, v2=0, u1=0, u2=0):
        return tuple(e) + (v1, v2, u1, u2)

    out = {}
    out["e0"] = vec(u1=1, u2=-1)
    for i in range(8):
        e = [0] * 8
        e[i] = 1
        out[f"e{i + 1}"] = vec(e)
    out["e9"] = vec(v1=1, v2=-1)
    out["e10"] = vec(v2=1)
    out["e11"] = vec(u2=1, v1=-1)
    out["e12"] = vec(E8_STAR, u2=2)
    out["e13"] = vec(E1_STAR, u1=2, u2=2, v1=-1, v2=-1)
    return {name: out[name] for name in FIGURE1_NAMES}


def figure1_vectors(P: PeriodLattice) -> dict[str, LatticeVector]:
    """The walls e0..e13 as vectors of L."""
    return {k: P.from_plus(v) for k, v in figure1_plus_coordinates().items()}


S4_WALLS = ("e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8", "e12", "e13")
S2_WALLS = ("e0", "e10", "e11")
S4H_WALLS = ("e9",)


# ---------------------------------------------------------------------------
# walls


@dataclass(frozen=True)
class WallType:
    kind: str  # "s2", "s4h", "s4" or "none"
    witness: LatticeVector | None = None  # t' in L^c_- for kind "s4"
    decomposition: tuple[LatticeVector, LatticeVector] | None = None  # (r', r'')
    bound: int | None = None

    def to_json(self, P: PeriodLattice | None = None) -> dict:
        out: dict = {"kind": self.kind}
        if self.witness is not None:
            out["witness"] = list(self.witness)
            if P is not None:
                out["witness_minus_coords"] = [int(x) for x in P.minus_coords(self.witness)]
        if self.decomposition is not None:
            out["r_prime"], out["r_second"] = map(list, self.decomposition)
        if self.bound is not None:
            out["bound"] = self.bound
        return out


def minus_vectors(P: PeriodLattice, square: int, h_product: int, box: int,
                  parity: Sequence[int] | None = None) -> list[tuple[int, ...]]:
    """Vectors of L^c_- (minus coordinates in ``[-box, box]^10``) with given square and ``.h``.

    Uses the splitting of the minus basis into an E8(2) block (definite,
    enumerated by completed squares) and the ``v'_1, v'_2`` block (two box
    coordinates).  ``parity`` fixes every coordinate modulo 2.
    """
    G = P.minus_lattice.gram
    assert all(G[i][j] == 0 for i in range(8) for j in (8, 9)), "minus basis must split"
    e8 = GramLattice([row[:8] for row in G[:8]])
    hc = [int(x) for x in P.minus_coords(P.h)]
    assert hc[:8] == [0] * 8
    out = []
    ys = range(-box, box + 1)
    for y1 in ys:
        for y2 in ys:
            if parity is not None and ((y1 - parity[8]) % 2 or (y2 - parity[9]) % 2):
                continue
            y = (y1, y2)
            hp = sum(yi * sum(G[8 + i][8 + j] * hc[8 + j] for j in range(2)) for i, yi in enumerate(y))
            if hp != h_product:
                continue
            ysq = sum(y[i] * G[8 + i][8 + j] * y[j] for i in range(2) for j in range(2))
            rest = square - ysq
            if rest > 0:
                continue
            allowed = []
            for i in range(8):
                if parity is None:
                    allowed.append(lambda v: -box <= v <= box)
                else:
                    allowed.append(lambda v, p=parity[i]: -box <= v <= box and (v - p) % 2 == 0)
            if rest == 0:
                xs = [(0,) * 8] if all(a(0) for a in allowed) else []
            else:
                xs = vectors_of_square(e8, rest, allowed=allowed)
            out.extend(x + y for x in xs)
    out.sort()
    return out


def _mod2_class_in_minus(P: PeriodLattice, e: Sequence[int]) -> list[int] | None:
    """Parities b with sum b_j m_j = e mod 2L, or None if e is not congruent to L^c_-."""
    # Gaussian elimination over GF(2): columns are the minus basis vectors in L/2L.
    rows = [[m[i] % 2 for m in P.minus_basis] + [e[i] % 2] for i in range(RANK)]
    k = len(P.minus_basis)
    r = 0
    pivots = []
    for col in range(k):
        piv = next((i for i in range(r, RANK) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(RANK):
            if i != r and rows[i][col]:
                rows[i] = [(a + b) % 2 for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if any(rows[i][k] for i in range(r, RANK)):
        return None
    sol = [0] * k
    for i, col in enumerate(pivots):
        sol[col] = rows[i][k]
    return sol


def find_decomposition(P: PeriodLattice, e: Sequence[int], bound: int):
    """Search for t' in L^c_- with t'^2 = -4, t'.h = 0, t' = e mod 2L.

    Returns ``(t', r', r'')`` with ``r' = (e + t')/2`` and ``r'' = -c(r')``,
    after checking that r', r'' are orthogonal roots orthogonal to h with
    ``r' - r'' = e``; None if nothing is found within the box.
    """
    parity = _mod2_class_in_minus(P, e)
    if parity is None:
        return None
    cands = minus_vectors(P, -4, 0, bound, parity)
    cands.sort(key=lambda t: (sum(abs(x) for x in t), t))
    for coords in cands:
        t = P.from_minus(coords)
        assert P.congruent_mod2(t, e)
        r1 = tuple((a + b) // 2 for a, b in zip(e, t))
        r2 = tuple(-x for x in P.apply_c(r1))
        ok = (P.norm(r1) == -2 and P.norm(r2) == -2 and P.inner(r1, r2) == 0
              and P.inner(r1, P.h) == 0 and P.inner(r2, P.h) == 0
              and tuple(a - b for a, b in zip(r1, r2)) == tuple(e))
        if ok:
            return t, r1, r2
    return None


def classify_wall(P: PeriodLattice, e: Sequence[int], search_bound: int = 3) -> WallType:
    e = tuple(e)
    if not P.in_plus(e):
        raise EigenlatticeError("wall vectors must be c-invariant")
    s = P.norm(e)
    if s == -2:
        return WallType("s2")
    if s != -4:
        return WallType("none")
    if P.congruent_mod2(e, P.h):
        return WallType("s4h")
    found = find_decomposition(P, e, search_bound)
    if found is None:
        return WallType("none", bound=search_bound)
    t, r1, r2 = found
    return WallType("s4", witness=t, decomposition=(r1, r2), bound=search_bound)


# ---------------------------------------------------------------------------
# Coxeter scheme


@dataclass(frozen=True)
class Edge:
    product: int
    cos2: Fraction
    kind: str  # "none", "single", "double", "other"

    @property
    def multiplicity(self) -> int | None:
        return {"none": 0, "single": 1, "double": 2}.get(self.kind)


def coxeter_scheme(P: PeriodLattice, vectors: Mapping[str, Sequence[int]]) -> dict[tuple[str, str], Edge]:
    """Edges between all pairs of the named walls.

    Angle pi/3 (cos^2 = 1/4) gives one edge, pi/4 (cos^2 = 1/2) two; any
    other nonzero product is reported as "other" with its exact cos^2.
    """
    names = list(vectors)
    sq = {}
    for n in names:
        s = P.norm(vectors[n])
        if s >= 0:
            raise LatticeError(f"{n} has nonnegative square {s}")
        sq[n] = s
    out = {}
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            ab = P.inner(vectors[a], vectors[b])
            cos2 = Fraction(ab * ab, sq[a] * sq[b])
            if ab == 0:
                kind = "none"
            elif cos2 == Fraction(1, 4):
                kind = "single"
            elif cos2 == Fraction(1, 2):
                kind = "double"
            else:
                kind = "other"
            out[(a, b)] = Edge(ab, cos2, kind)
    return out


def scheme_edges(scheme: Mapping[tuple[str, str], Edge]) -> list[dict]:
    return [{"a": a, "b": b, "product": e.product, "cos2": str(e.cos2), "kind": e.kind}
            for (a, b), e in scheme.items() if e.kind != "none"]


# ---------------------------------------------------------------------------
# spheres and vanishing cycles


def sphere_classes(P: PeriodLattice) -> tuple[LatticeVector, LatticeVector]:
    v = figure1_vectors(P)
    sp_in = v["e11"]
    sp_out = tuple(a + b for a, b in zip(v["e11"], v["e9"]))
    assert P.reflect(v["e9"], sp_in) == sp_out
    return sp_in, sp_out


INNER, BOTH, OUTER, UNRECOGNIZED = "inner", "both", "outer", "unrecognized"


def vanishing_cycle_form(P: PeriodLattice, r: Sequence[int]) -> str:
    r = tuple(r)
    if not P.in_plus(r):
        raise EigenlatticeError("real vanishing cycles lie in L^c_+")
    if P.norm(r) != -2:
        raise LatticeError("vanishing cycles have square -2")
    sp_in, sp_out = sphere_classes(P)
    if r == sp_in:
        return INNER
    a, b = P.inner(r, sp_in), P.inner(r, sp_out)
    if a == 1 and b == 1:
        return BOTH
    if a == 0 and b == 2:
        return OUTER
    return UNRECOGNIZED


def s2_walls_near(P: PeriodLattice, depth: int = 2) -> dict[str, LatticeVector]:
    """Type s2 walls of the extended period domain reachable from the polyhedron.

    The s2 walls e0, e10, e11 are moved by at most ``depth`` reflections in
    the type s4 walls e1..e8, e12, e13; the results and their images under the
    reflection in e9 are returned with descriptive names.
    """
    v = figure1_vectors(P)
    PL = P.plus_lattice
    gens = [P.plus_int_coords(v[n]) for n in S4_WALLS]
    out: dict[str, LatticeVector] = {}
    for seed in S2_WALLS:
        orbit = orbit_bounded(PL, gens, [P.plus_int_coords(v[seed])], depth)
        for x, word in orbit.items():
            name = seed + "".join(f"|{_wall_name(P, m)}" for m in word.mirrors)
            out[name] = P.from_plus(x)
    e9 = v["e9"]
    for name, x in list(out.items()):
        y = P.reflect(e9, x)
        if y not in out.values():
            out[f"r9({name})"] = y
    return out


def _wall_name(P: PeriodLattice, plus_vec) -> str:
    for name, coords in figure1_plus_coordinates().items():
        if tuple(coords) == tuple(plus_vec):
            return name
    return str(tuple(plus_vec))


def simple_edge_valency_check(P: PeriodLattice, depth: int = 2) -> dict:
    """Valencies of e11 and e11 + e9 in the graph of single edges between s2 walls.

    The vertices are the s2 walls from :func:`s2_walls_near`; within
    e0..e13 alone, e11 has a single simple neighbour (e0), so the images of
    e0 under the s4 reflections are needed.
    """
    vecs = s2_walls_near(P, depth)
    sp_in, sp_out = sphere_classes(P)
    names = {x: n for n, x in vecs.items()}
    n_in, n_out = names[sp_in], names[sp_out]
    scheme = coxeter_scheme(P, vecs)
    neighbours: dict[str, list[str]] = {n: [] for n in vecs}
    for (a, b), e in scheme.items():
        if e.kind == "single":
            neighbours[a].append(b)
            neighbours[b].append(a)
    fig = figure1_vectors(P)
    e9_e11 = coxeter_scheme(P, {"e9": fig["e9"], "e11": fig["e11"]})[("e9", "e11")].kind
    return {
        "depth": depth,
        "vertices": len(vecs),
        "valency": {"e11": len(neighbours[n_in]), "e11+e9": len(neighbours[n_out])},
        "neighbours": {"e11": sorted(neighbours[n_in]), "e11+e9": sorted(neighbours[n_out])},
        "e9_e11_edge": e9_e11,
        "pass": len(neighbours[n_in]) > 2 and len(neighbours[n_out]) > 2,
    }


def export_figure1(P: PeriodLattice | None = None, bound: int = 3) -> dict:
    P = P or build_period_lattice()
    vecs = figure1_vectors(P)
    plus = figure1_plus_coordinates()
    rows = []
    for name, v in vecs.items():
        wt = classify_wall(P, v, bound)
        rows.append({"name": name, "plus_coords": list(plus[name]), "square": P.norm(v),
                     "type": wt.to_json(P)})
    return {"vectors": rows, "edges": scheme_edges(coxeter_scheme(P, vecs)),
            "plus_basis": list(PLUS_NAMES)}


def mod2_rank_in_plus(P: PeriodLattice, vectors: Sequence[Sequence[int]]) -> int:
    """Rank of the classes of invariant vectors in L^c_+ / 2L^c_+."""
    rows = []
    for v in vectors:
        c = P.plus_coords(v)
        if c is None or any(x.denominator != 1 for x in c):
            raise EigenlatticeError("vector not in L^c_+")
        rows.append([int(x) for x in c])
    return rank_mod2(rows)


# edges of the drawn scheme; all other pairs of e0..e13 are orthogonal
FIGURE1_SINGLE = (
    ("e1", "e2"), ("e2", "e3"), ("e3", "e4"), ("e3", "e5"), ("e5", "e6"), ("e6", "e7"),
    ("e7", "e8"), ("e1", "e13"), ("e8", "e12"), ("e0", "e11"),
)
FIGURE1_DOUBLE = (("e0", "e12"), ("e9", "e10"), ("e9", "e11"), ("e10", "e13"))


def figure1_snapshot() -> dict[tuple[str, str], str]:
    key = {n: i for i, n in enumerate(FIGURE1_NAMES)}
    out = {}
    for kind, pairs in (("single", FIGURE1_SINGLE), ("double", FIGURE1_DOUBLE)):
        for a, b in pairs:
            out[tuple(sorted((a, b), key=key.get))] = kind
    return out


def verify_figure1(P: PeriodLattice | None = None, bound: int = 3) -> dict:
    """Squares, wall types and Coxeter scheme of e0..e13 against the drawn scheme."""
    P = P or build_period_lattice()
    vecs = figure1_vectors(P)
    squares = {n: P.norm(v) for n, v in vecs.items()}
    want_sq = {n: -2 if n in S2_WALLS else -4 for n in vecs}
    types = {n: classify_wall(P, v, bound).kind for n, v in vecs.items()}
    want_types = {n: "s2" if n in S2_WALLS else "s4h" if n in S4H_WALLS else "s4" for n in vecs}
    edges = {k: e.kind for k, e in coxeter_scheme(P, vecs).items() if e.kind != "none"}
    snap = figure1_snapshot()
    diff = sorted(set(edges.items()) ^ set(snap.items()))
    counts = {k: sum(1 for t in types.values() if t == k) for k in ("s2", "s4h", "s4")}
    return {
        "squares_ok": squares == want_sq,
        "types": types,
        "type_counts": counts,
        "types_ok": types == want_types,
        "edges": len(edges),
        "scheme_mismatches": [list(d) for d in diff],
        "bound": bound,
        "pass": squares == want_sq and types == want_types and not diff,
    }
