from math import comb

import pytest

from ncgrass.exactla import StructuralError, Subspace
from ncgrass.ngrass import (NgrSpec, b_from_algebra, build_b_algebra, build_ngr,
                            compare_with_geometry, ngr_generator, ngr_relation)
from ncgrass.zalg import make_quadratic

SPECS = [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)]


def euler_oracle(A, m, l):
    """dim A_{m,l} from the dual dims alone, by acyclicity of K_l^m."""
    D = A.dual()
    known = {m: 1}
    for t in range(m + 1, l + 1):
        known[t] = -sum((-1) ** (t - k) * D.piece_dim(t, k) * known[k] for k in range(m, t))
    return known[l]


def test_spec_validation():
    with pytest.raises(StructuralError):
        NgrSpec(0, 3)
    with pytest.raises(StructuralError):
        NgrSpec(3, 3)
    assert NgrSpec(2, 4).p == 3


def test_generator_pattern():
    s = NgrSpec(2, 4)
    assert [ngr_generator(s, i).dim for i in range(-3, 3)] == [6, 4, 4, 6, 4, 4]
    assert [ngr_relation(s, i).dim for i in range(3)] == [4, 6, 4]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_projective_space_case_is_symmetric(n):
    A = build_ngr(NgrSpec(1, n))
    for i in range(-4, 5):
        for j in range(i, 5):
            assert A.piece_dim(i, j) == comb(j - i + n - 1, n - 1)


def test_superdiagonals_and_a_minus_two_one():
    A = build_ngr(NgrSpec(2, 4))
    assert [A.piece_dim(-2, -2 + d) for d in range(3)] == [1, 4, 10]
    assert A.piece_dim(-2, 1) == 45
    assert euler_oracle(A, -2, 1) == 45
    assert A.piece_dim(0, 1) == 6


@pytest.mark.parametrize("m,n", SPECS)
def test_euler_oracle_agrees_with_quotient(m, n):
    A = build_ngr(NgrSpec(m, n))
    for i in range(-(n - m + 1), 1):
        for j in range(i, i + 5):
            assert euler_oracle(A, i, j) == A.piece_dim(i, j)


def test_hyperplane_case_has_fifteen_dimensional_quadratic_piece():
    A = build_ngr(NgrSpec(3, 4))
    assert A.gen(0).dim == 4 and A.gen(1).dim == 4
    assert A.rel(0).dim == 1 and A.rel(1).dim == 1
    for i in range(-2, 3):
        assert A.piece_dim(i, i + 2) == 15


def test_b_algebra_homs():
    B = build_b_algebra(NgrSpec(2, 4))
    assert [B.hom(-2, -2 + d).dim for d in range(3)] == [1, 4, 10]
    assert B.hom(0, -1).dim == 0
    assert build_b_algebra(NgrSpec(1, 2)).hom(-1, 0).dim == 2
    t = B.table(-2, -1, 0)
    assert len(t) == 16


@pytest.mark.parametrize("m,n", SPECS)
def test_compare_with_geometry(m, n):
    s = NgrSpec(m, n)
    c = compare_with_geometry(build_ngr(s), build_b_algebra(s), s)
    assert c.passed, c.witness


def test_compare_pieces_one_three_and_two_four():
    s = NgrSpec(1, 3)
    c = compare_with_geometry(build_ngr(s), build_b_algebra(s), s)
    assert [d["dim"] for d in c.data["pieces"] if d["i"] == -2] == [3, 6]
    s = NgrSpec(2, 4)
    c = compare_with_geometry(build_ngr(s), build_b_algebra(s), s)
    assert [d["dim"] for d in c.data["pieces"] if d["i"] == -2] == [4, 10]


def test_perturbed_relations_fail_geometry():
    s = NgrSpec(2, 4)
    A = build_ngr(s)
    rels = [A.rel(r) for r in range(3)]
    # drop one antisymmetric relation between two V* slots
    amb = rels[1].ambient
    rels[1] = Subspace(amb, list(rels[1].rows)[1:])
    bad = make_quadratic([A.gen(r) for r in range(3)], rels, period=3)
    c = compare_with_geometry(bad, build_b_algebra(s), s)
    assert not c.passed
    assert (c.witness["i"], c.witness["j"]) == (-2, 0)


def test_window_as_finite_algebra():
    A = build_ngr(NgrSpec(2, 4))
    F = b_from_algebra(A, -2, 1)
    assert F.hom(-2, 1).dim == 45 and F.hom(1, -2).dim == 0
    g = F.compose(-2, 0, 1, {0: 1}, {0: 1})
    assert g
