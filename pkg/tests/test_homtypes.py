from fractions import Fraction
from math import comb

import pytest

from quartic_lattice.homtypes import (
    DETERMINANTAL_GLUE,
    GEOMETRIC,
    OverlatticeError,
    check_conf1,
    check_conf2,
    conf2_box_search,
    determinantal_overlattice,
    enumerate_sdet_extensions,
    half_sum,
    isotropic_subgroups,
    moduli_dimension,
    overlattice,
    reference_lattice,
    s_det,
    verify_sdet_isomorphism_class,
)
from quartic_lattice.lattice import (
    discriminant_form,
    inner,
    multiple,
    signature,
    standard,
)
from quartic_lattice.reflection import roots

F = Fraction


def test_sdet_base():
    S = s_det()
    assert S.rank == 11 and S.det == 4 * 2 ** 10


def test_determinantal_overlattice():
    O = determinantal_overlattice()
    assert O.index == 2
    assert abs(O.lattice.det) == 1024
    assert O.lattice.is_even
    assert signature(O.lattice) == (1, 10)
    assert O.contains(DETERMINANTAL_GLUE)


def test_overlattice_embedding_consistent():
    O = determinantal_overlattice()
    for i, row in enumerate(O.embedding):
        assert O.to_base(row) == tuple(F(int(i == j)) for j in range(11))


def test_empty_glue_is_base():
    S = s_det(4)
    O = overlattice(S, [])
    assert O.index == 1 and abs(O.lattice.det) == abs(S.det)
    assert check_conf1(O, range(4)).ok and check_conf2(O, 4).ok


def test_glue_validation():
    S = s_det(4)
    with pytest.raises(OverlatticeError):
        overlattice(S, [half_sum(4, [1], False)])         # square -1/2
    with pytest.raises(OverlatticeError):
        overlattice(S, [half_sum(4, [1, 2], False)])      # square -1, odd
    with pytest.raises(OverlatticeError):
        overlattice(S, [(F(1, 3), 0, 0, 0, 0)])           # pairs to 2/3 with a_1


def test_zero_square_glue_accepted_as_lattice():
    S = s_det(10)
    g = half_sum(10, [1, 2], True)
    assert inner(S, g, g) == 0
    O = overlattice(S, [g])
    assert O.index == 2


def test_conf1_d4_witness():
    O = overlattice(s_det(10), [half_sum(10, [1, 2, 3, 4], False)])
    v = check_conf1(O, range(10))
    assert not v.ok
    assert v.witness == half_sum(10, [1, 2, 3, 4], False)
    assert inner(O.base, v.witness, v.witness) == -2


def test_conf1_passes_on_determinantal():
    O = determinantal_overlattice()
    assert check_conf1(O, range(10)).ok
    assert check_conf2(O, 10).ok


def test_conf2_witness():
    O = overlattice(s_det(10), [half_sum(10, [1, 2], True)])
    v = check_conf2(O, 10)
    assert not v.ok
    assert v.witness == half_sum(10, [1, 2], True)


def test_d4_is_the_only_4a1_extension():
    # 4A1 plus the half sum is D4: 24 roots
    O = overlattice(multiple(standard("A1"), 4), [(F(1, 2),) * 4])
    assert len(roots(O.lattice)) == 24


# ---------------------------------------------------------------------------
# enumeration


def test_enumeration_forms():
    cands = enumerate_sdet_extensions()
    even = {(c.support, c.h_coefficient): c for c in cands if c.even}
    assert set(even) == {(4, 0), (8, 0), (2, F(1, 2)), (6, F(1, 2)), (10, F(1, 2))}
    assert even[(4, 0)].form == 1 and even[(4, 0)].status == "fails conf1"
    assert even[(8, 0)].form == 2 and even[(8, 0)].status == GEOMETRIC
    assert even[(2, F(1, 2))].form == 3 and even[(2, F(1, 2))].status == "fails conf2"
    assert even[(6, F(1, 2))].form == 4 and even[(6, F(1, 2))].status == GEOMETRIC
    assert even[(10, F(1, 2))].form == 5 and even[(10, F(1, 2))].status == "accepted"
    assert all(c.index == 2 for c in even.values())


def test_odd_supports_rejected():
    for c in enumerate_sdet_extensions():
        if c.support % 2:
            assert not c.even


def test_candidate_json():
    for c in enumerate_sdet_extensions():
        d = c.to_json()
        assert d["support"] == c.support and F(d["square"]) == c.square
        assert len(c.glue) == 11


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_enumeration_against_isotropic_subgroups(k):
    """Order-2 isotropic subgroups of the discriminant form of kA1 + Zh.

    Each even class of support size s and h-coefficient j/4 stands for
    C(k, s) classes once the reordering quotient is undone.
    """
    S = s_det(k)
    F_ = discriminant_form(S)
    subgroups = isotropic_subgroups(F_)
    order2 = [H for H in subgroups if len(H) == 2]
    expected = sum(comb(k, c.support) for c in enumerate_sdet_extensions(k) if c.even)
    assert len(order2) == expected


# ---------------------------------------------------------------------------
# conf2: algebraic reduction against direct search


def _toy_extensions(k):
    S = s_det(k)
    out = [overlattice(S, [])]
    for s in range(0, k + 1):
        for with_h in (False, True):
            g = half_sum(k, range(1, s + 1), with_h)
            if not any(g):
                continue
            sq = inner(S, g, g)
            if sq.denominator == 1 and sq % 2 == 0:
                out.append(overlattice(S, [g]))
    # one index-4 example
    if k >= 6:
        g1, g2 = half_sum(k, [1, 2, 3, 4], False), half_sum(k, [3, 4, 5, 6], False)
        out.append(overlattice(S, [g1, g2]))
    return out


@pytest.mark.parametrize("k", [2, 4, 6])
def test_conf2_reduction_matches_box_search(k):
    for O in _toy_extensions(k):
        direct = conf2_box_search(O, k)
        verdict = check_conf2(O, k)
        assert verdict.ok == (not direct)
        if not verdict.ok:
            assert verdict.witness in direct


# ---------------------------------------------------------------------------
# isomorphism class


def test_reference_lattices():
    assert signature(reference_lattice(-1)) == (1, 10)
    assert signature(reference_lattice(+1)) == (2, 9)
    assert abs(reference_lattice(-1).det) == 1024


def test_isomorphism_class_report():
    r = verify_sdet_isomorphism_class()
    assert r["index"] == 2 and abs(r["det"]) == 1024
    assert r["signature"] == r["reference_signature"] == [1, 10]
    assert r["signature_match"]
    assert r["discriminant_order"] == r["reference_discriminant_order"] == 1024
    assert r["discriminant_forms_isomorphic"]
    assert r["complement_ranks_add_to_22"]
    assert r["complement_discriminant_anti_isometric"]
    assert r["square2_witness_square"] == 2


def test_discriminant_not_isomorphic_to_wrong_sign():
    # [4] instead of [-4] changes the q value of the order-4 generator
    from quartic_lattice.lattice import finite_quadratic_forms_isomorphic

    O = determinantal_overlattice()
    assert not finite_quadratic_forms_isomorphic(discriminant_form(O.lattice),
                                                 discriminant_form(reference_lattice(+1)))


@pytest.mark.parametrize("rank_,dim", [(10, 9), (0, 19), (19, 0)])
def test_moduli_dimension(rank_, dim):
    from quartic_lattice.lattice import GramLattice

    sigma = GramLattice([[-2 * (i == j) for j in range(rank_)] for i in range(rank_)])
    assert moduli_dimension(sigma) == dim


def test_isotropic_subgroups_small():
    # U(2): q values 0, 0, 1 on the nonzero elements -> two isotropic lines
    from quartic_lattice.lattice import rescale

    F_ = discriminant_form(rescale(standard("U"), 2))
    subs = isotropic_subgroups(F_)
    assert sorted(len(H) for H in subs) == [1, 2, 2]
