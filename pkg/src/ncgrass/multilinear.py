"""
Symmetric and exterior powers, their natural maps, and line-bundle Hom spaces
on projective space.

Wedge bases are strictly increasing index tuples, symmetric bases are sorted
index multisets, both listed in lexicographic order.  Every sign comes from
``shuffle_sign``; the hook maps are the partial transposes of ``wedge_mul``
and nothing else.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from math import comb
from typing import Dict, List, Optional, Tuple

from .exactla import (QQ, BasedSpace, FieldSpec, LinMap, Mono, StructuralError,
                      Tensor, Wedge, iadd)


def atom(name: str, n: int, field: FieldSpec = QQ) -> BasedSpace:
    """The space ``name`` with basis ``name1 .. name{n}``."""
    if n < 1:
        raise StructuralError("atom space needs n >= 1")
    return BasedSpace(["%s%d" % (name, i + 1) for i in range(n)], field, name)


def shuffle_sign(seq) -> int:
    """Sign of the permutation sorting ``seq``; 0 on a repeated entry."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    s = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


@dataclass(frozen=True)
class PowerSpace:
    base: BasedSpace
    kind: str
    degree: int
    space: BasedSpace
    idx: Tuple[Tuple[int, ...], ...]

    @property
    def dim(self):
        return self.space.dim

    def position(self, t) -> int:
        return self.space.index(self._label(t))

    def _label(self, t):
        ls = self.base.labels
        return (Wedge if self.kind == "ext" else Mono)(ls[i] for i in t)


_POWERS: Dict[tuple, PowerSpace] = {}


def build_power(base: BasedSpace, kind: str, d: int) -> PowerSpace:
    if d < 0:
        raise StructuralError("negative power degree")
    key = (base, kind, d)
    hit = _POWERS.get(key)
    if hit is not None:
        return hit
    n = base.dim
    if kind == "ext":
        idx = tuple(combinations(range(n), d))
        lab = Wedge
        name = "L%d%s" % (d, base.name)
    elif kind == "sym":
        idx = tuple(combinations_with_replacement(range(n), d))
        lab = Mono
        name = "S%d%s" % (d, base.name)
    else:
        raise StructuralError("power kind must be 'ext' or 'sym'")
    ls = base.labels
    space = BasedSpace([lab(ls[i] for i in t) for t in idx], base.field, name)
    ps = PowerSpace(base, kind, d, space, idx)
    _POWERS[key] = ps
    return ps


def ext(base, d):
    return build_power(base, "ext", d)


def sym(base, d):
    return build_power(base, "sym", d)


# ---------------------------------------------------------------------------
# canonical maps


def _wedge_mul(V, a, b):
    A, B, C = ext(V, a), ext(V, b), ext(V, a + b)
    dom = A.space.tensor(B.space)
    cols = []
    for I in A.idx:
        for J in B.idx:
            s = shuffle_sign(I + J)
            cols.append({C.position(tuple(sorted(I + J))): s} if s else {})
    return LinMap(dom, C.space, cols)


def _sym_mul(V, a, b):
    A, B, C = sym(V, a), sym(V, b), sym(V, a + b)
    dom = A.space.tensor(B.space)
    cols = [{C.position(tuple(sorted(I + J))): 1} for I in A.idx for J in B.idx]
    return LinMap(dom, C.space, cols)


def _ext_comul(V, a, b):
    A, B, K = ext(V, a), ext(V, b), ext(V, a + b)
    cod = A.space.tensor(B.space)
    nb = B.dim
    cols = []
    for T in K.idx:
        v = {}
        for I in combinations(T, a):
            J = tuple(x for x in T if x not in I)
            v[A.position(I) * nb + B.position(J)] = shuffle_sign(I + J)
        cols.append(v)
    return LinMap(K.space, cod, cols)


def _ext_embed(U):
    L = ext(U, 2)
    cod = U.tensor(U)
    n = U.dim
    cols = [{a * n + b: 1, b * n + a: -1} for a, b in L.idx]
    return LinMap(L.space, cod, cols)


def _hook_right(V, c):
    # I -> sum_k sign(I,k) (I u k) (x) e_k^*
    if c + 1 > V.dim:
        raise StructuralError("hook target degree exceeds dim V")
    S, T = ext(V, c), ext(V, c + 1)
    Vd = V.dual()
    cod = T.space.tensor(Vd)
    n = V.dim
    cols = []
    for I in S.idx:
        v = {}
        for k in range(n):
            s = shuffle_sign(I + (k,))
            if s:
                v[T.position(tuple(sorted(I + (k,)))) * n + k] = s
        cols.append(v)
    return LinMap(S.space, cod, cols)


def _hook_left(V, c):
    # I -> sum_k sign(k,I) e_k^* (x) (k u I)
    if c + 1 > V.dim:
        raise StructuralError("hook target degree exceeds dim V")
    S, T = ext(V, c), ext(V, c + 1)
    Vd = V.dual()
    cod = Vd.tensor(T.space)
    nt = T.dim
    cols = []
    for I in S.idx:
        v = {}
        for k in range(V.dim):
            s = shuffle_sign((k,) + I)
            if s:
                v[k * nt + T.position(tuple(sorted((k,) + I)))] = s
        cols.append(v)
    return LinMap(S.space, cod, cols)


def _contraction(V):
    """Evaluation V* (x) V -> k."""
    one = BasedSpace(("1",), V.field)
    n = V.dim
    dom = V.dual().tensor(V)
    return LinMap(dom, one, [{0: 1} if a == b else {} for a in range(n) for b in range(n)])


def _interior(V, c):
    """V* (x) L^c V -> L^{c-1} V, e_k^* (x) e_I -> sign(k, I - k) e_{I - k}."""
    if c < 1:
        raise StructuralError("interior product needs c >= 1")
    S, T = ext(V, c), ext(V, c - 1)
    dom = V.dual().tensor(S.space)
    cols = []
    for k in range(V.dim):
        for I in S.idx:
            if k in I:
                J = tuple(x for x in I if x != k)
                cols.append({T.position(J): shuffle_sign((k,) + J)})
            else:
                cols.append({})
    return LinMap(dom, T.space, cols)


def _sym_project(U):
    S = sym(U, 2)
    n = U.dim
    return LinMap(U.tensor(U), S.space,
                  [{S.position(tuple(sorted((a, b)))): 1} for a in range(n) for b in range(n)])


_MAPS = {
    "wedge_mul": (_wedge_mul, ("a", "b")),
    "sym_mul": (_sym_mul, ("a", "b")),
    "ext_comul": (_ext_comul, ("a", "b")),
    "ext_embed": (_ext_embed, ()),
    "hook_right": (_hook_right, ("c",)),
    "hook_left": (_hook_left, ("c",)),
    "contraction": (_contraction, ()),
    "interior": (_interior, ("c",)),
    "sym_project": (_sym_project, ()),
}


def canonical_map(name: str, V: BasedSpace, **params) -> LinMap:
    """
    Named natural map built on the space ``V``.

    >>> canonical_map("wedge_mul", V, a=1, b=2)   # L1 V (x) L2 V -> L3 V
    """
    try:
        fn, keys = _MAPS[name]
    except KeyError:
        raise StructuralError("unknown canonical map %r" % name) from None
    if set(params) != set(keys):
        raise StructuralError("%s takes parameters %s" % (name, keys))
    for k in keys:
        if params[k] < 0:
            raise StructuralError("%s: negative degree" % name)
    return fn(V, *(params[k] for k in keys))


# ---------------------------------------------------------------------------
# line bundles on P(V)


def line_bundle_hom(V: BasedSpace, i: int, j: int, k: int = 0) -> BasedSpace:
    """Ext^k(O(i), O(j)) on P(V) with its monomial basis (Serre-dual basis for k = n-1)."""
    if k < 0:
        raise StructuralError("negative cohomological degree")
    n = V.dim
    Vd = V.dual()
    if k == 0:
        return sym(Vd, j - i).space if j >= i else BasedSpace((), V.field)
    if n > 1 and k == n - 1:
        e = i - j - n
        return sym(Vd, e).space.dual() if e >= 0 else BasedSpace((), V.field)
    return BasedSpace((), V.field)


def mono_mul(I: Tuple[int, ...], J: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(sorted(I + J))


def compose_line_bundle(V: BasedSpace, f, fd: int, g, gd: int):
    """
    Product of ``f`` in S^fd V* and ``g`` in S^gd V* (sparse vectors on the
    monomial bases); this is composition O(i) -> O(i+fd) -> O(i+fd+gd).
    """
    if fd < 0 or gd < 0:
        raise StructuralError("line-bundle twists do not chain")
    Vd = V.dual()
    A, B, C = sym(Vd, fd), sym(Vd, gd), sym(Vd, fd + gd)
    mod = V.field.mod
    out = {}
    for a, x in f.items():
        I = A.idx[a]
        for b, y in g.items():
            iadd(out, {C.position(mono_mul(I, B.idx[b])): x * y}, 1, mod)
    return out


def dim_sym(n, d):
    return comb(n + d - 1, d) if d >= 0 else 0


def dim_ext(n, d):
    return comb(n, d) if 0 <= d <= n else 0
