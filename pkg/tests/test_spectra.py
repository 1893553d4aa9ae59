import json
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic_lattice.spectra import (
    NoSpectrahedralPointError,
    PencilError,
    Poly,
    QuadricPencil,
    bisection_count,
    check_line,
    constants_table,
    corank,
    count_real_roots,
    find_spectrahedral_point,
    index,
    isolate_real_roots,
    node_candidate_check,
    quadric_space_dimension,
    random_pencil,
    restrict_to_line,
    spectrahedron_contains,
    squarefree_factors,
    sturm_count,
    verify_x4,
)

from .strategies import symmetric_matrices

F = Fraction
I4 = [[int(i == j) for j in range(4)] for i in range(4)]


def diag(*d):
    return [[d[i] if i == j else 0 for j in range(4)] for i in range(4)]


def diagonal_pencil():
    """x0 q0 + ... with q_k = E_kk: det is x0 x1 x2 x3."""
    return QuadricPencil([diag(*[int(i == k) for i in range(4)]) for k in range(4)])


# ---------------------------------------------------------------------------
# inertia


@pytest.mark.parametrize("d,ind,cor", [((1, 1, 1, 1), 0, 0), ((-1, 2, 0, 0), 1, 2),
                                       ((-1, -1, -1, -3), 4, 0), ((0, 0, 0, 0), 0, 4)])
def test_index_examples(d, ind, cor):
    assert index(diag(*d)) == ind and corank(diag(*d)) == cor


@settings(max_examples=80)
@given(symmetric_matrices(n=st.just(4), entries=st.integers(-4, 4)))
def test_index_symmetry(M):
    neg = [[-x for x in row] for row in M]
    assert index(M) + index(neg) + corank(M) == 4


def test_spectrahedron_contains():
    V = random_pencil(3)
    assert spectrahedron_contains(V, (1, 0, 0, 0))
    assert spectrahedron_contains(V, (-1, 0, 0, 0))
    with pytest.raises(PencilError):
        spectrahedron_contains(V, (0, 0, 0, 0))


# ---------------------------------------------------------------------------
# polynomials


def test_count_real_roots_examples():
    assert count_real_roots(Poly([-1, 0, 0, 0, 1])) == (2, 2)            # t^4 - 1
    # (t-1)^2 (t^2+1) = t^4 - 2t^3 + 2t^2 - 2t + 1
    assert count_real_roots(Poly([1, -2, 2, -2, 1])) == (1, 2)
    assert count_real_roots(Poly([9, 0, -10, 0, 1])) == (4, 4)          # (t^2-1)(t^2-9)
    assert count_real_roots(Poly([1, 0, 1])) == (0, 0)


def test_squarefree_factors():
    # (t-1)^2 (t+2)^3
    p = Poly([-1, 1]) * Poly([-1, 1]) * Poly([2, 1]) * Poly([2, 1]) * Poly([2, 1])
    fs = squarefree_factors(p)
    assert fs[0].degree == 0 and fs[1] == Poly([-1, 1]) and fs[2] == Poly([2, 1])


def test_isolation_intervals_separate():
    p = Poly([9, 0, -10, 0, 1])
    ivs = isolate_real_roots(p)
    assert len(ivs) == 4
    for (a, b), r in zip(ivs, (-3, -1, 1, 3)):
        assert a <= r <= b
    # open intervals: neighbours may share an endpoint, which is then not a root
    for (a1, b1), (a2, b2) in zip(ivs, ivs[1:]):
        assert b1 <= a2 and (b1 < a2 or p(b1) != 0)


def _random_quartic(rng):
    mode = rng.randrange(3)
    if mode == 0:
        return Poly([rng.randint(-20, 20) for _ in range(4)] + [rng.choice([-3, -1, 1, 2])])
    # products of small factors produce repeated and rational roots
    p = Poly([1])
    for _ in range(4 if mode == 1 else 2):
        p = p * Poly([rng.randint(-3, 3), rng.choice([-1, 1, 2])])
    if mode == 2:
        p = p * Poly([rng.randint(-2, 4), rng.randint(-2, 2), 1])
    return p


def test_sturm_against_oracles():
    """Sturm counts against Descartes bisection and against sympy on 1000 quartics."""
    rng = random.Random(0)
    t = sympy.Symbol("t")
    for _ in range(1000):
        p = _random_quartic(rng)
        got = count_real_roots(p)
        assert got == bisection_count(p), p
        sp = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)], t)
        real = sympy.real_roots(sp)
        assert got == (len(set(real)), len(real)), p


@settings(max_examples=100)
@given(st.lists(st.integers(-30, 30), min_size=2, max_size=6))
def test_sturm_count_matches_distinct_roots(cs):
    p = Poly(cs)
    if p.degree <= 0:
        return
    assert sturm_count(p) == bisection_count(p)[0]


# ---------------------------------------------------------------------------
# lines


def test_restrict_identity_pencil():
    V = QuadricPencil([I4, diag(0, 0, 0, 0), diag(0, 0, 0, 0), diag(0, 0, 0, 1)])
    # det(diag(1,1,1,1+t)) along a = e0, b = e3
    p = restrict_to_line(V, (1, 0, 0, 0), (0, 0, 0, 1))
    assert p == Poly([1, 1])


def test_restrict_scaling_direction():
    V = random_pencil(5)
    a, b = (1, 0, 0, 0), (F(1), F(2), F(-1), F(3))
    p = restrict_to_line(V, a, b)
    q = restrict_to_line(V, a, tuple(3 * x for x in b))
    # q(t) = p(3t): roots divide by 3
    for k, (pc, qc) in enumerate(zip(p.coeffs, q.coeffs)):
        assert qc == pc * 3 ** k


def test_restrict_rejects_dependent():
    with pytest.raises(PencilError):
        restrict_to_line(random_pencil(0), (1, 0, 0, 0), (2, 0, 0, 0))


def test_line_inside_quartic():
    V = diagonal_pencil()
    # x3 = 0 on the whole line
    rep = check_line(V, (1, 1, 1, 0), (0, 1, 2, 0))
    assert rep.inside_quartic


def test_diagonal_pencil_four_roots():
    V = diagonal_pencil()
    rep = check_line(V, (1, 1, 1, 1), (1, -2, 3, -4))
    assert not rep.inside_quartic and rep.real_with_multiplicity == 4 and rep.jumps_ok


def test_root_at_infinity_counted():
    V = diagonal_pencil()
    # b = (1,0,0,0): det(a + t b) is linear in t, three roots at infinity
    rep = check_line(V, (1, 1, 1, 1), (1, 0, 0, 0))
    assert rep.finite_roots == 1 and rep.at_infinity == 3 and rep.real_with_multiplicity == 4


def test_line_missing_spectrahedron_can_lose_roots():
    # a + t b = [[1, t], [t, -1]] twice: det = (1 + t^2)^2 has no real roots
    V = QuadricPencil([diag(1, -1, 1, -1), [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
                       diag(0, 0, 0, 0), diag(0, 0, 0, 0)])
    rep = check_line(V, (1, 0, 0, 0), (0, 1, 0, 0))
    assert rep.real_with_multiplicity == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_lines_off_spectrahedron_have_even_count(seed):
    V = random_pencil(seed % 97)
    rng = random.Random(seed)
    a = tuple(F(rng.randint(-5, 5)) for _ in range(4))
    b = tuple(F(rng.randint(-5, 5)) for _ in range(4))
    if not any(a) or not any(b):
        return
    try:
        rep = check_line(V, a, b, jumps=False)
    except PencilError:
        return
    if not rep.inside_quartic:
        assert rep.real_with_multiplicity % 2 == 0
        assert rep.real_with_multiplicity <= 4


# ---------------------------------------------------------------------------
# the four-real-points property


@pytest.mark.parametrize("seed", range(4))
def test_verify_x4_small(seed):
    r = verify_x4(random_pencil(seed), samples=25, seed=seed)
    assert r["pass"] and r["jumps_ok"]
    assert set(r["histogram"]) <= {4}


def test_verify_x4_diagonal():
    r = verify_x4(diagonal_pencil(), samples=30)
    assert r["pass"]


def test_no_spectrahedral_point():
    # diagonal entries 1,2 sum to 2 x2 and entries 3,4 to -2 x2: never definite
    V = QuadricPencil([diag(1, -1, 0, 0), diag(0, 0, 1, -1), diag(1, 1, -1, -1),
                       [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]])
    with pytest.raises(NoSpectrahedralPointError):
        find_spectrahedral_point(V)


def test_degenerate_pencil_rejected():
    z = diag(0, 0, 0, 0)
    V = QuadricPencil([diag(1, 1, 1, 0), diag(1, 0, 0, 0), z, z])
    assert V.is_degenerate()
    with pytest.raises(PencilError):
        verify_x4(V, samples=2)


# ---------------------------------------------------------------------------
# nodes


def test_node_candidates():
    V = diagonal_pencil()
    node = node_candidate_check(V, (1, 1, 0, 0))
    assert node["corank"] == 2 and node["kind"] == "node" and node["onSpectraBoundary"]
    assert node_candidate_check(V, (1, 1, 1, 1))["corank"] == 0
    smooth = node_candidate_check(V, (1, -1, 1, 0))
    assert smooth["corank"] == 1 and not smooth["onSpectraBoundary"]
    with pytest.raises(PencilError):
        node_candidate_check(V, (0, 0, 0, 0))


def test_constants():
    t = constants_table()
    assert t["N"] == {1: 2, 2: 5, 3: 9, 4: 14}
    assert t["dim_Qu"] == quadric_space_dimension(3) == 9
    assert t["deg_Delta"] == 4 and t["deg_Delta_prime"] == 10


# ---------------------------------------------------------------------------
# serialisation


def test_pencil_json_roundtrip(tmp_path):
    V = random_pencil(7)
    path = tmp_path / "p.json"
    path.write_text(json.dumps(V.to_json()))
    assert QuadricPencil.load(path) == V
    W = QuadricPencil([[[F(1, 3) * (i == j) for j in range(4)] for i in range(4)]] * 4)
    assert QuadricPencil.from_json(json.loads(json.dumps(W.to_json()))) == W


@pytest.mark.parametrize("data", [
    {"q": [I4, I4, I4]},
    {"q": [I4, I4, I4, [[1, 2, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]]},
    {"q": [I4, I4, I4, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]]},
    {"q": [I4, I4, I4, [["x", 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]]},
    {"quadrics": []},
    "nonsense",
])
def test_malformed_pencils(data):
    with pytest.raises(PencilError):
        QuadricPencil.from_json(data)


def test_invalid_json_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(PencilError):
        QuadricPencil.load(path)


def test_polynomial_json():
    p = Poly([F(1, 2), 0, -3])
    assert Poly([F(c) for c in p.to_json()]) == p
