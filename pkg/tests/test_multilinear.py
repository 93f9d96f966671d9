from math import comb

import pytest
from hypothesis import given, strategies as st

from ncgrass.exactla import LinMap, StructuralError, kernel_image, rank
from ncgrass.multilinear import (atom, canonical_map, compose_line_bundle, dim_ext, dim_sym, ext,
                                 line_bundle_hom, shuffle_sign, sym)


def test_power_dims():
    V = atom("v", 4)
    assert [ext(V, d).dim for d in range(6)] == [1, 4, 6, 4, 1, 0]
    assert [sym(V, d).dim for d in range(4)] == [1, 4, 10, 20]
    assert dim_sym(4, 3) == 20 and dim_ext(4, 5) == 0 and dim_sym(3, -1) == 0


def test_shuffle_sign():
    assert shuffle_sign((0, 1, 2)) == 1
    assert shuffle_sign((1, 0, 2)) == -1
    assert shuffle_sign((2, 0, 1)) == 1
    assert shuffle_sign((1, 1)) == 0


def test_wedge_is_antisymmetric_in_degree_one():
    V = atom("v", 3)
    w = canonical_map("wedge_mul", V, a=1, b=1)
    for i in range(3):
        for j in range(3):
            assert w({i * 3 + j: 1}) == {k: -x for k, x in w({j * 3 + i: 1}).items()}


@pytest.mark.parametrize("a,b", [(1, 1), (1, 2), (2, 2), (0, 3)])
def test_wedge_after_comultiplication_is_binomial(a, b):
    V = atom("v", 4)
    mul = canonical_map("wedge_mul", V, a=a, b=b)
    co = canonical_map("ext_comul", V, a=a, b=b)
    both = mul.compose(co)
    c = comb(a + b, a)
    for j, col in enumerate(both.cols):
        assert col == {j: c}


def test_hooks_are_injective_and_match_interior():
    V = atom("v", 4)
    for c in range(3):
        assert rank(canonical_map("hook_right", V, c=c)) == dim_ext(4, c)
        assert rank(canonical_map("hook_left", V, c=c)) == dim_ext(4, c)
    # interior after hook_left multiplies by (n - c)
    c = 1
    hook = canonical_map("hook_left", V, c=c)
    inner = canonical_map("interior", V, c=c + 1)
    both = inner.compose(hook)
    for j, col in enumerate(both.cols):
        assert col == {j: 4 - c}


def test_ext_embed_and_contraction():
    V = atom("v", 3)
    emb = canonical_map("ext_embed", V.dual())
    ker, img, r = kernel_image(emb)
    assert r == 3 and ker.dim == 0
    ev = canonical_map("contraction", V)
    assert rank(ev) == 1
    sp = canonical_map("sym_project", V.dual())
    assert sp.compose(emb).is_zero()


def test_unknown_and_bad_parameters():
    V = atom("v", 2)
    with pytest.raises(StructuralError):
        canonical_map("nope", V)
    with pytest.raises(StructuralError):
        canonical_map("wedge_mul", V, a=1)
    with pytest.raises(StructuralError):
        canonical_map("hook_right", V, c=2)


def test_line_bundle_homs_and_serre_duality():
    V = atom("v", 3)
    assert line_bundle_hom(V, -2, 0).dim == 6
    assert line_bundle_hom(V, 0, -1).dim == 0
    assert line_bundle_hom(V, 0, -3, 2).dim == 1
    assert line_bundle_hom(V, 0, -5, 2).dim == 6
    assert line_bundle_hom(V, 0, 0, 1).dim == 0


degrees = st.integers(0, 3)


@given(degrees, degrees, degrees, st.data())
def test_wedge_multiplication_is_associative(a, b, c, data):
    V = atom("v", 5)
    if a + b + c > 5:
        return
    A, B, C = ext(V, a), ext(V, b), ext(V, c)
    i = data.draw(st.integers(0, A.dim - 1))
    j = data.draw(st.integers(0, B.dim - 1))
    k = data.draw(st.integers(0, C.dim - 1))
    ab = canonical_map("wedge_mul", V, a=a, b=b)({i * B.dim + j: 1})
    left = canonical_map("wedge_mul", V, a=a + b, b=c)({t * C.dim + k: x for t, x in ab.items()})
    bc = canonical_map("wedge_mul", V, a=b, b=c)({j * C.dim + k: 1})
    right = canonical_map("wedge_mul", V, a=a, b=b + c)({i * ext(V, b + c).dim + t: x for t, x in bc.items()})
    assert left == right


@given(degrees, degrees, degrees, st.data())
def test_line_bundle_composition_is_associative_and_commutative(a, b, c, data):
    V = atom("v", 3)
    Vd = V.dual()

    def draw(d):
        return {data.draw(st.integers(0, sym(Vd, d).dim - 1)): data.draw(st.integers(1, 3))}

    f, g, h = draw(a), draw(b), draw(c)
    left = compose_line_bundle(V, compose_line_bundle(V, f, a, g, b), a + b, h, c)
    right = compose_line_bundle(V, f, a, compose_line_bundle(V, g, b, h, c), b + c)
    assert left == right
    assert compose_line_bundle(V, f, a, g, b) == compose_line_bundle(V, g, b, f, a)
