from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic_lattice.k3model import (
    BOTH,
    INNER,
    OUTER,
    RANK,
    S2_WALLS,
    S4_WALLS,
    S4H_WALLS,
    EigenlatticeError,
    classify_wall,
    coxeter_scheme,
    export_figure1,
    figure1_plus_coordinates,
    figure1_snapshot,
    figure1_vectors,
    is_zero_mod2,
    minus_vectors,
    mod2_rank_in_plus,
    s2_walls_near,
    simple_edge_valency_check,
    sphere_classes,
    vanishing_cycle_form,
    verify_figure1,
)
from quartic_lattice.lattice import LatticeError, discriminant_form, signature

vectors22 = st.lists(st.integers(-5, 5), min_size=RANK, max_size=RANK).map(tuple)


# ---------------------------------------------------------------------------
# the model


def test_k3_lattice_invariants(P):
    assert P.L.rank == 22 and abs(P.L.det) == 1 and P.L.is_even
    assert signature(P.L) == (3, 19)


def test_eigenlattices(P):
    assert signature(P.plus_lattice) == (1, 11)
    assert signature(P.minus_lattice) == (2, 8)
    assert P.plus_lattice.rank + P.minus_lattice.rank == 22
    # complementary primitive sublattices of a unimodular lattice: equal discriminant orders
    assert abs(P.plus_lattice.det) == abs(P.minus_lattice.det) == 2 ** 10


def test_h(P):
    assert P.norm(P.h) == 4
    assert P.apply_c(P.h) == tuple(-x for x in P.h)


@settings(max_examples=50)
@given(vectors22, vectors22)
def test_c_is_involutive_isometry(P, x, y):
    cx, cy = P.apply_c(x), P.apply_c(y)
    assert P.apply_c(cx) == x
    assert P.inner(cx, cy) == P.inner(x, y)


@settings(max_examples=50)
@given(vectors22)
def test_eigen_decomposition(P, x):
    cx = P.apply_c(x)
    plus = tuple(a + b for a, b in zip(x, cx))
    minus = tuple(a - b for a, b in zip(x, cx))
    assert P.in_plus(plus) and P.in_minus(minus)
    assert all(c.denominator == 1 for c in P.plus_coords(plus))
    assert all(c.denominator == 1 for c in P.minus_coords(minus))
    # x = (plus + minus)/2 and the two halves are orthogonal
    assert P.inner(plus, minus) == 0


def test_plus_coordinates_reject_minus(P):
    with pytest.raises(EigenlatticeError):
        P.plus_int_coords(P.h)


def test_plus_lattice_discriminant_is_two_elementary(P):
    F = discriminant_form(P.plus_lattice)
    assert set(F.orders) == {2} and len(F.orders) == 10


# ---------------------------------------------------------------------------
# the polyhedron


def test_figure1_squares(P):
    v = figure1_vectors(P)
    for name, x in v.items():
        assert P.norm(x) == (-2 if name in S2_WALLS else -4)
        assert P.in_plus(x)
        assert P.inner(x, P.h) == 0


def test_figure1_wall_types(P):
    v = figure1_vectors(P)
    kinds = {n: classify_wall(P, x).kind for n, x in v.items()}
    assert {n for n, k in kinds.items() if k == "s2"} == set(S2_WALLS)
    assert {n for n, k in kinds.items() if k == "s4h"} == set(S4H_WALLS)
    assert {n for n, k in kinds.items() if k == "s4"} == set(S4_WALLS)


def test_s4_witnesses_are_certificates(P):
    v = figure1_vectors(P)
    for name in S4_WALLS:
        wt = classify_wall(P, v[name])
        t = wt.witness
        assert P.in_minus(t) and P.norm(t) == -4 and P.inner(t, P.h) == 0
        assert P.congruent_mod2(t, v[name])
        r1, r2 = wt.decomposition
        assert tuple(a - b for a, b in zip(r1, r2)) == v[name]
        assert P.norm(r1) == P.norm(r2) == -2 and P.inner(r1, r2) == 0
        assert P.apply_c(r1) == tuple(-x for x in r2)


def test_e9_is_congruent_to_h(P):
    v = figure1_vectors(P)
    assert P.congruent_mod2(v["e9"], P.h)
    assert classify_wall(P, v["e9"]).kind == "s4h"
    assert not any(P.congruent_mod2(v[n], P.h) for n in S4_WALLS)


def test_coxeter_scheme_matches_snapshot(P):
    v = figure1_vectors(P)
    edges = {k: e.kind for k, e in coxeter_scheme(P, v).items() if e.kind != "none"}
    assert edges == figure1_snapshot()


def test_e12_e13_orthogonal(P):
    v = figure1_vectors(P)
    assert P.inner(v["e12"], v["e13"]) == 0


def test_scheme_rejects_nonnegative(P):
    with pytest.raises(LatticeError):
        coxeter_scheme(P, {"h": P.h})


def test_verify_figure1(P):
    r = verify_figure1(P)
    assert r["pass"] and r["type_counts"] == {"s2": 3, "s4h": 1, "s4": 10}


def test_export_roundtrip(P):
    out = export_figure1(P)
    assert [r["name"] for r in out["vectors"]] == [f"e{i}" for i in range(14)]
    plus = figure1_plus_coordinates()
    for r in out["vectors"]:
        assert tuple(r["plus_coords"]) == plus[r["name"]]
    assert len(out["edges"]) == 14


# ---------------------------------------------------------------------------
# spheres


def test_sphere_classes(P):
    sp_in, sp_out = sphere_classes(P)
    assert P.norm(sp_in) == P.norm(sp_out) == -2
    assert P.inner(sp_in, sp_out) == 0


def test_vanishing_cycle_forms(P):
    v = figure1_vectors(P)
    assert vanishing_cycle_form(P, v["e11"]) == INNER
    assert vanishing_cycle_form(P, v["e0"]) == BOTH
    assert vanishing_cycle_form(P, v["e10"]) == OUTER
    with pytest.raises(EigenlatticeError):
        vanishing_cycle_form(P, P.minus_basis[0])


def test_valency_exceeds_two(P):
    r = simple_edge_valency_check(P)
    assert r["valency"] == {"e11": 3, "e11+e9": 3}
    assert r["e9_e11_edge"] == "double"
    assert r["pass"]


def test_s2_images_are_walls(P):
    for name, x in s2_walls_near(P).items():
        assert P.norm(x) == -2 and P.in_plus(x) and P.inner(x, P.h) == 0, name


# ---------------------------------------------------------------------------
# helpers


def test_minus_vectors_filter(P):
    got = minus_vectors(P, -4, 0, 1)
    assert got
    for t in got:
        x = P.from_minus(t)
        assert P.norm(x) == -4 and P.inner(x, P.h) == 0
        assert all(abs(c) <= 1 for c in t)


def test_mod2_rank(P):
    v = figure1_vectors(P)
    assert mod2_rank_in_plus(P, [v["e1"], v["e2"], v["e1"]]) == 2
    with pytest.raises(EigenlatticeError):
        mod2_rank_in_plus(P, [P.h])


def test_is_zero_mod2():
    assert is_zero_mod2((2, -4, 0))
    assert not is_zero_mod2((2, 1))


def test_half_plus_coordinates(P):
    # the matched pair e_i + e'_i is divisible by 2 in L
    for p, m in zip(P.plus_basis, P.minus_basis):
        half = tuple(Fraction(a + b, 2) for a, b in zip(p, m))
        assert all(x.denominator == 1 for x in half)


def test_minus_vectors_against_brute_force(P):
    import itertools

    import numpy as np

    G = np.array(P.minus_lattice.gram, dtype=np.int64)
    hc = np.array([int(x) for x in P.minus_coords(P.h)], dtype=np.int64)
    X = np.array(list(itertools.product(range(-1, 2), repeat=10)), dtype=np.int64)
    sq = np.einsum("ij,jk,ik->i", X, G, X)
    hp = X @ G @ hc
    expected = sorted(tuple(int(c) for c in row) for row in X[(sq == -4) & (hp == 0)])
    assert minus_vectors(P, -4, 0, 1) == expected
