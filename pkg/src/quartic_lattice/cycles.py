"""Admissible systems of vanishing cycles and the (m, n) node constructions."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .k3model import (
    S2_WALLS,
    S4_WALLS,
    EigenlatticeError,
    PeriodLattice,
    classify_wall,
    figure1_plus_coordinates,
    figure1_vectors,
    is_zero_mod2,
    minus_vectors,
    mod2_rank_in_plus,
)
from .lattice import GramLattice, LatticeError, LatticeVector, saturation
from .reflection import ReflectionWord, check_mirror, vectors_of_square, verify_word


class ConstructionError(LatticeError):
    pass


class ObstructedError(ConstructionError):
    """``(m, n) = (0, 0)``: five conjugate pairs cannot exist."""


def _add(*vs: Sequence[int]) -> LatticeVector:
    return tuple(sum(c) for c in zip(*vs))


def _neg(v):
    return tuple(-x for x in v)


def _half(v) -> LatticeVector:
    assert is_zero_mod2(v)
    return tuple(x // 2 for x in v)


# ---------------------------------------------------------------------------
# the chain of nine s4 walls


W_LABELS = ("e13", "e1", "e2", "e3", "e5", "e6", "e7", "e8", "e12")


def relabel_walls(P: PeriodLattice) -> list[LatticeVector]:
    """``w_1, ..., w_9`` (returned 0-based): the s4 walls along the long path, e4 omitted."""
    v = figure1_vectors(P)
    w = [v[n] for n in W_LABELS]
    for i in range(9):
        if P.norm(w[i]) != -4:
            raise ConstructionError(f"w{i + 1} does not have square -4")
        for j in range(i + 1, 9):
            expected = 2 if j == i + 1 else 0
            if P.inner(w[i], w[j]) != expected:
                raise ConstructionError(f"w{i + 1}.w{j + 1} != {expected}")
    return w


def matched_minus_walls(P: PeriodLattice) -> dict[int, LatticeVector]:
    """The anti-invariant partners ``w'_k`` of the odd-index walls ``w_k``."""
    mb = P.minus_basis
    e = {i + 1: mb[i] for i in range(8)}
    v1p, v2p = mb[8], mb[9]
    plus = figure1_plus_coordinates()
    e1s = P.from_minus(list(plus["e13"][:8]) + [0, 0])  # e1'* on e'_1..e'_8
    e8s = P.from_minus(list(plus["e12"][:8]) + [0, 0])
    return {
        1: _add(v1p, _neg(v2p), e1s),
        3: e[2],
        5: e[5],
        7: e[7],
        9: e8s,
    }


def matched_orthogonality(P: PeriodLattice) -> dict:
    """Products among ``w'_1, w'_3, ..., w'_9`` and the congruences ``w'_k = w_k mod 2L``.

    Only ``w'_1.w'_9`` is nonzero, so any run of at most four consecutive
    odd indices is pairwise orthogonal.
    """
    wp = matched_minus_walls(P)
    w = relabel_walls(P)
    ks = sorted(wp)
    nonzero = [(i, j) for i in ks for j in ks if i < j and P.inner(wp[i], wp[j]) != 0]
    runs_ok = all(
        P.inner(wp[i], wp[j]) == 0
        for start in range(len(ks)) for length in range(2, 5)
        for i in ks[start:start + length] for j in ks[start:start + length]
        if i < j and start + length <= len(ks)
    )
    return {
        "nonzero_pairs": nonzero,
        "squares": {k: P.norm(wp[k]) for k in ks},
        "orthogonal_to_h": all(P.inner(wp[k], P.h) == 0 for k in ks),
        "anti_invariant": all(P.in_minus(wp[k]) for k in ks),
        "congruent": all(P.congruent_mod2(wp[k], w[k - 1]) for k in ks),
        "runs_of_four_orthogonal": runs_ok,
    }


# ---------------------------------------------------------------------------
# systems


@dataclass(frozen=True)
class RealCycle:
    vector: LatticeVector
    seed: str                  # name of the s2 wall the certificate starts from
    word: ReflectionWord       # mirrors in L^c_+ coordinates


@dataclass(frozen=True)
class ConstructionPlan:
    m: int
    n: int
    p: int
    w: tuple[LatticeVector, ...]
    t_indices: tuple[int, ...]       # 1-based indices k with t = w_k
    t_prime: tuple[LatticeVector, ...]


@dataclass(frozen=True)
class CycleSystem:
    real: tuple[RealCycle, ...]
    pairs: tuple[tuple[LatticeVector, LatticeVector], ...]
    plan: ConstructionPlan | None = None
    ambient: PeriodLattice | None = field(default=None, repr=False, compare=False)

    @property
    def vectors(self) -> list[LatticeVector]:
        out = [r.vector for r in self.real]
        for a, b in self.pairs:
            out += [a, b]
        return out

    def to_json(self, P: PeriodLattice) -> dict:
        out = {
            "real_cycles": [
                {"vector": list(r.vector),
                 "plus_coords": list(P.plus_int_coords(r.vector)),
                 "seed": r.seed,
                 "word": [_wall_label(m) for m in r.word.mirrors],
                 "form": _form_name(P, r.vector)}
                for r in self.real
            ],
            "pairs": [{"s_prime": list(a), "s_second": list(b)} for a, b in self.pairs],
        }
        if self.plan is not None:
            out["m"], out["n"], out["p"] = self.plan.m, self.plan.n, self.plan.p
            out["t"] = [f"w{k}" for k in self.plan.t_indices]
        return out


def _wall_label(plus_vec) -> str:
    for name, coords in figure1_plus_coordinates().items():
        if tuple(coords) == tuple(plus_vec):
            return name
    return str(list(plus_vec))


def _form_name(P, v):
    from .k3model import vanishing_cycle_form

    return vanishing_cycle_form(P, v)


def check_mn(m: int, n: int) -> None:
    if m < 0 or n < 0:
        raise ConstructionError("m and n must be nonnegative")
    if m % 2 or n % 2:
        raise ConstructionError("the numbers of real nodes m and n must both be even")
    if m + n > 10:
        raise ConstructionError("a determinantal quartic has ten nodes: need m + n <= 10")
    if m + n == 0:
        raise ObstructedError(
            "m = n = 0 is impossible: the five conjugate pairs would give five pairwise "
            "orthogonal square -4 vectors in L^c_- summing to h mod 2, and no such quintuple exists")


def construct_system(P: PeriodLattice, m: int, n: int) -> CycleSystem:
    """The ten vanishing cycles with m real nodes on both spheres and n on the outer one.

    ``r'_i = e0 + w_9 + ... + w_{11-i}`` and ``r''_j = e10 + w_1 + ... + w_{j-1}``
    (empty sums for i = 1, j = 1), ``t_k = w_{n+2k-1}`` for ``k <= p =
    5 - (m+n)/2``; each ``t_k`` is paired with its matched anti-invariant
    vector ``t'_k`` to give the conjugate roots ``(t'_k ± t_k)/2``.
    """
    check_mn(m, n)
    v = figure1_vectors(P)
    w = relabel_walls(P)
    W = {k + 1: w[k] for k in range(9)}
    plus = {k: P.plus_int_coords(W[k]) for k in W}
    real = []
    for i in range(1, m + 1):
        ks = list(range(9, 10 - i, -1))  # 9, 8, ..., 11 - i
        vec = _add(v["e0"], *[W[k] for k in ks]) if ks else v["e0"]
        real.append(RealCycle(vec, "e0", ReflectionWord(tuple(plus[k] for k in ks))))
    for j in range(1, n + 1):
        ks = list(range(1, j))
        vec = _add(v["e10"], *[W[k] for k in ks]) if ks else v["e10"]
        real.append(RealCycle(vec, "e10", ReflectionWord(tuple(plus[k] for k in ks))))
    p = 5 - (m + n) // 2
    wp = matched_minus_walls(P)
    t_idx = tuple(n + 2 * k - 1 for k in range(1, p + 1))
    if p > 4:
        raise ConstructionError("p > 4 cannot occur for m + n >= 2")
    tps = tuple(wp[k] for k in t_idx)
    pairs = []
    for k, tp in zip(t_idx, tps):
        t = W[k]
        pairs.append((_half(_add(tp, t)), _half(_add(tp, _neg(t)))))
    plan = ConstructionPlan(m, n, p, tuple(w), t_idx, tps)
    return CycleSystem(tuple(real), tuple(pairs), plan, P)


# ---------------------------------------------------------------------------
# the six checks of the construction


@dataclass
class Check:
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)

    def to_json(self):
        return {"check": self.name, "pass": self.ok, **self.detail}


def _certificate_ok(P: PeriodLattice, rc: RealCycle, seeds: Sequence[str]) -> bool:
    if rc.seed not in seeds:
        return False
    s4 = {tuple(figure1_plus_coordinates()[n]) for n in S4_WALLS}
    if any(tuple(m) not in s4 for m in rc.word.mirrors):
        return False
    PL = P.plus_lattice
    for mirror in rc.word.mirrors:
        check_mirror(PL, mirror)
    seed = figure1_plus_coordinates()[rc.seed]
    try:
        target = P.plus_int_coords(rc.vector)
    except EigenlatticeError:
        return False
    return verify_word(PL, seed, rc.word, target)


def six_checks(P: PeriodLattice, system: CycleSystem) -> list[Check]:
    plan = system.plan
    if plan is None:
        raise ConstructionError("six_checks needs a constructed system")
    fig = figure1_vectors(P)
    r1 = [rc for rc in system.real if rc.seed == "e0"]
    r2 = [rc for rc in system.real if rc.seed == "e10"]
    w = {k + 1: x for k, x in enumerate(plan.w)}
    ts = [w[k] for k in plan.t_indices]
    # the invariant part of each pair is t (s' - s'' = t)
    ts_from_pairs = [_add(a, _neg(b)) for a, b in system.pairs]
    vecs = [rc.vector for rc in system.real] + ts_from_pairs
    checks = []
    checks.append(Check("r' reflected from e0",
                        len(r1) == plan.m and all(_certificate_ok(P, rc, ["e0"]) for rc in r1),
                        {"count": len(r1)}))
    checks.append(Check("r'' reflected from e10",
                        len(r2) == plan.n and all(_certificate_ok(P, rc, ["e10"]) for rc in r2),
                        {"count": len(r2)}))
    # membership in the relabelled chain w_1..w_9, which leaves out the branch vertex e4
    chain = {fig[n]: n for n in W_LABELS}
    names = [chain.get(t) for t in ts_from_pairs]
    checks.append(Check("t are walls of the chain", all(nm is not None for nm in names),
                        {"t": names, "as_planned": ts == ts_from_pairs}))
    bad = [(i, j) for i in range(len(vecs)) for j in range(i + 1, len(vecs))
           if P.inner(vecs[i], vecs[j]) != 0]
    checks.append(Check("pairwise orthogonal", not bad, {"nonorthogonal": bad}))
    try:
        rk = mod2_rank_in_plus(P, vecs)
    except EigenlatticeError:
        rk = -1
    checks.append(Check("independent mod 2L^c_+", rk == len(vecs),
                        {"rank": rk, "vectors": len(vecs)}))
    total = _add(*vecs)
    checks.append(Check("sum = h mod 2L", P.congruent_mod2(total, P.h), {}))
    return checks


# ---------------------------------------------------------------------------
# admissibility


def primitive_hull_roots(P: PeriodLattice, vectors: Sequence[Sequence[int]]) -> list[LatticeVector]:
    """All roots of the saturation of the span of ``vectors`` in L (must be definite)."""
    basis = saturation(vectors)
    H = GramLattice(P.L.gram_of(basis))
    out = []
    for c in vectors_of_square(H, -2):
        out.append(tuple(sum(ci * b[j] for ci, b in zip(c, basis)) for j in range(len(basis[0]))))
    return out


def check_admissible(P: PeriodLattice, system: CycleSystem) -> list[Check]:
    vecs = system.vectors
    checks = []
    sq = [P.norm(x) for x in vecs]
    bad = [(i, j) for i in range(len(vecs)) for j in range(i + 1, len(vecs))
           if P.inner(vecs[i], vecs[j]) != 0]
    bad_h = [i for i, x in enumerate(vecs) if P.inner(x, P.h) != 0]
    checks.append(Check("roots, orthogonal to each other and to h",
                        all(s == -2 for s in sq) and not bad and not bad_h,
                        {"squares": sq, "nonorthogonal": bad, "not_orthogonal_to_h": bad_h}))
    try:
        found = set(primitive_hull_roots(P, vecs))
        allowed = set(vecs) | {_neg(x) for x in vecs}
        extra = sorted(found - allowed)
        checks.append(Check("primitive hull has no other roots", not extra and allowed <= found,
                            {"roots": len(found), "extra": [list(x) for x in extra[:5]]}))
    except LatticeError as exc:
        checks.append(Check("primitive hull has no other roots", False, {"error": str(exc)}))
    cert = [rc.seed for rc in system.real
            if not (P.in_plus(rc.vector) and _certificate_ok(P, rc, S2_WALLS))]
    checks.append(Check("real cycles are P-walls (certified)", not cert,
                        {"unverified": cert}))
    fig = figure1_vectors(P)
    s4 = {fig[n] for n in S4_WALLS}
    s4 |= {_neg(x) for x in s4}
    badpairs = []
    for k, (a, b) in enumerate(system.pairs):
        d = _add(a, _neg(b))
        if P.apply_c(a) != _neg(b) or d not in s4 or classify_wall(P, d).kind != "s4":
            badpairs.append(k)
    checks.append(Check("pairs conjugate, difference an s4 wall of S", not badpairs,
                        {"bad_pairs": badpairs}))
    return checks


def glue_relation(P: PeriodLattice, system: CycleSystem) -> bool:
    """``(sum of cycles + h)/2`` lies in the primitive hull of the cycles and h."""
    vecs = system.vectors
    g = _add(*vecs, P.h)
    if not is_zero_mod2(g):
        return False
    half = _half(g)
    basis = saturation(vecs + [P.h])
    from .lattice import solve_in_basis

    c = solve_in_basis(basis, half)
    return c is not None and all(x.denominator == 1 for x in c)


def parity_statistic(P: PeriodLattice, system: CycleSystem) -> int:
    """Parity difference of the ``v1`` and ``v2`` coefficients of the sum of all ten cycles.

    The sum is split into its invariant and anti-invariant parts, written in
    the plus and minus bases; the coefficients of ``v_k`` and ``v'_k`` are
    added up.
    """
    vecs = system.vectors
    if len(vecs) != 10:
        raise ConstructionError("parity statistic needs all ten cycles")
    s = _add(*vecs)
    cs = P.apply_c(s)
    plus_part = [Fraction(a + b, 2) for a, b in zip(s, cs)]
    minus_part = [Fraction(a - b, 2) for a, b in zip(s, cs)]
    pc = P.plus_coords(plus_part)
    mc = P.minus_coords(minus_part)
    c1 = pc[8] + mc[8]
    c2 = pc[9] + mc[9]
    d = c1 - c2
    if d.denominator != 1:
        raise ConstructionError("coefficient difference is not integral")
    return int(d) % 2


# ---------------------------------------------------------------------------
# no quintuple


def _class_code(coords: Sequence[int]) -> int:
    return sum((x % 2) << k for k, x in enumerate(coords))


def quintuple_search(P: PeriodLattice, box: int, target: Sequence[int] | None = None):
    """Search for five pairwise orthogonal square -4 vectors of L^c_- summing to target mod 2.

    Candidates are the vectors with minus coordinates in ``[-box, box]``,
    square -4 and orthogonal to h, taken up to sign.  ``target`` defaults
    to the minus coordinates of h.  Returns ``(quintuple or None, stats)``.
    """
    from ._quintuple import find_orthogonal_quintuple

    cands = minus_vectors(P, -4, 0, box)
    cands = [t for t in cands if next(x for x in t if x) > 0]
    if target is None:
        target = [int(x) for x in P.minus_coords(P.h)]
    if not cands:
        return None, {"candidates": 0, "nodes": 0}
    G = np.array(P.minus_lattice.gram, dtype=np.int64)
    A = np.array(cands, dtype=np.int64)
    adj = (A @ G @ A.T) == 0
    cls = np.array([_class_code(t) for t in cands], dtype=np.int64)
    hit, nodes = find_orthogonal_quintuple(adj, cls, _class_code(target))
    stats = {"candidates": len(cands), "nodes": int(nodes)}
    if len(hit) == 0:
        return None, stats
    return [cands[i] for i in hit], stats


def check_no5(P: PeriodLattice, box: int = 2, samples: int = 1000, seed: int = 0) -> dict:
    """Evidence that no orthogonal quintuple of square -4 vectors sums to h mod 2L^c_-.

    (a) ``f(a) = a^2 + a.h mod 4`` vanishes on L^c_-: all Gram entries of
    L^c_- are even and so are the ``b.h`` on its basis, which makes ``f``
    additive mod 4, so checking the basis suffices.
    (b) hence ``(h + 2a)^2 = 4 + 4 f(a) = 4 mod 16``; spot-checked on random a.
    (c) a quintuple would have ``(t_1 + ... + t_5)^2 = -20 = 12 mod 16``.
    Finally an exhaustive search in a coordinate box (evidence only).
    """
    if box < 1:
        raise ValueError("box must be at least 1")
    M = P.minus_lattice
    hc = [int(x) for x in P.minus_coords(P.h)]
    basis_ok = []
    for i in range(M.rank):
        b = [int(i == j) for j in range(M.rank)]
        basis_ok.append((M.norm(b) + M.inner(b, hc)) % 4 == 0)
    gram_even = all(x % 2 == 0 for row in M.gram for x in row)
    h_even = all(M.inner([int(i == j) for j in range(M.rank)], hc) % 2 == 0 for i in range(M.rank))
    rng = random.Random(seed)
    bad_samples = 0
    for _ in range(samples):
        a = [rng.randint(-50, 50) for _ in range(M.rank)]
        v = [x + 2 * y for x, y in zip(hc, a)]
        if M.norm(v) % 16 != 4:
            bad_samples += 1
    zero_sample = M.norm(hc) % 16
    quint, stats = quintuple_search(P, box)
    return {
        "characteristic_basis": basis_ok,
        "gram_even": gram_even,
        "h_products_even": h_even,
        "characteristic": all(basis_ok) and gram_even and h_even,
        "random_samples": samples,
        "random_failures": bad_samples,
        "h_square_mod16": zero_sample,
        "quintuple_square_mod16": (-20) % 16,
        "contradiction": (-20) % 16 != 4,
        "box": box,
        "box_search": stats,
        "quintuple_found": None if quint is None else [list(t) for t in quint],
        "pass": (all(basis_ok) and gram_even and h_even and bad_samples == 0
                 and (-20) % 16 != 4 and quint is None),
    }


# ---------------------------------------------------------------------------
# the table


def even_pairs() -> list[tuple[int, int]]:
    return [(m, n) for m in range(0, 11, 2) for n in range(0, 11, 2) if 2 <= m + n <= 10]


def realizability_table(P: PeriodLattice, box: int = 2) -> list[dict]:
    rows = []
    no5 = check_no5(P, box)
    rows.append({"m": 0, "n": 0, "status": "obstructed" if no5["pass"] else "unverified",
                 "reason": "no orthogonal quintuple of square -4 vectors sums to h mod 2"})
    for m, n in even_pairs():
        system = construct_system(P, m, n)
        six = six_checks(P, system)
        adm = check_admissible(P, system)
        ok = all(c.ok for c in six) and all(c.ok for c in adm)
        rows.append({
            "m": m, "n": n, "p": system.plan.p,
            "status": "realized" if ok else "failed",
            "six_checks": [c.ok for c in six],
            "admissible": [c.ok for c in adm],
            "parity": parity_statistic(P, system),
            "glue_relation": glue_relation(P, system),
        })
    return rows
