"""
The noncommutative Grassmannian Z-algebra A^{m,V} and the endomorphism
algebra B^{m,V} of the line bundles O(m-n), ..., O on P(V).

With p = n - m + 1 the generator at i is Lambda^{n-m} V when p | i and V^*
otherwise.  Relations are images of the natural maps:

* ext_embed(Lambda^2 V^*) in V^* (x) V^*        when p does not divide i, i+1
* hook_left(Lambda^{n-m-1} V) in V^* (x) Lambda^{n-m} V   when p | i
* hook_right(Lambda^{n-m-1} V) in Lambda^{n-m} V (x) V^*  when p | i+1
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from .exactla import QQ, BasedSpace, FieldSpec, LinMap, StructuralError, Subspace, kernel_image
from .multilinear import atom, canonical_map, compose_line_bundle, ext, line_bundle_hom, sym
from .zalg import DEFAULT_BUDGET, Certificate, QuadraticZAlgebra, make_quadratic


@dataclass(frozen=True)
class NgrSpec:
    m: int
    n: int
    field: FieldSpec = QQ

    def __post_init__(self):
        if not (1 <= self.m <= self.n - 1):
            raise StructuralError("need 1 <= m <= n-1, got m=%d n=%d" % (self.m, self.n))

    @property
    def p(self):
        return self.n - self.m + 1

    def V(self) -> BasedSpace:
        return atom("v", self.n, self.field)


def ngr_generator(spec: NgrSpec, i: int) -> BasedSpace:
    V = spec.V()
    if i % spec.p == 0:
        return ext(V, spec.n - spec.m).space
    return V.dual()


def _image(f: LinMap) -> Subspace:
    return kernel_image(f)[1]


def ngr_relation(spec: NgrSpec, i: int) -> Subspace:
    V = spec.V()
    p, c = spec.p, spec.n - spec.m - 1
    if i % p == 0:
        return _image(canonical_map("hook_left", V, c=c))
    if (i + 1) % p == 0:
        return _image(canonical_map("hook_right", V, c=c))
    return _image(canonical_map("ext_embed", V.dual()))


def build_ngr(spec: NgrSpec, budget: int = DEFAULT_BUDGET) -> QuadraticZAlgebra:
    p = spec.p
    gens = [ngr_generator(spec, r) for r in range(p)]
    rels = [ngr_relation(spec, r) for r in range(p)]
    return make_quadratic(gens, rels, "positive", period=p,
                          name="A(%d,%d)" % (spec.m, spec.n), budget=budget)


# ---------------------------------------------------------------------------
# B^{m,V}


class FDAlgebra:
    """
    Finite-dimensional algebra on objects ``lo..hi`` (a directed category).
    ``hom(i, j)`` is a BasedSpace, ``compose(i, j, k, g, f)`` takes g in hom(j,k)
    and f in hom(i,j) as sparse vectors.
    """

    def __init__(self, objects: Tuple[int, int], hom, compose, field=QQ, name=""):
        self.objects = objects
        self._hom = hom
        self._compose = compose
        self.field = field
        self.name = name
        self._cache: Dict = {}

    def object_range(self):
        return range(self.objects[0], self.objects[1] + 1)

    def hom(self, i, j) -> BasedSpace:
        key = ("h", i, j)
        if key not in self._cache:
            self._cache[key] = self._hom(i, j)
        return self._cache[key]

    def compose(self, i, j, k, g, f):
        if not (g and f):
            return {}
        return self._compose(i, j, k, g, f)

    def unit(self, i):
        return {0: 1}

    def table(self, i, j, k):
        """mult[(b, a)] = composite of basis b of hom(j,k) after basis a of hom(i,j)."""
        key = ("t", i, j, k)
        t = self._cache.get(key)
        if t is None:
            t = {}
            for b in range(self.hom(j, k).dim):
                for a in range(self.hom(i, j).dim):
                    t[b, a] = self._compose(i, j, k, {b: 1}, {a: 1})
            self._cache[key] = t
        return t


def build_b_algebra(spec: NgrSpec) -> FDAlgebra:
    V = spec.V()

    def hom(i, j):
        return line_bundle_hom(V, i, j, 0)

    def comp(i, j, k, g, f):
        if not (i <= j <= k):
            raise StructuralError("line-bundle twists do not chain")
        return compose_line_bundle(V, f, j - i, g, k - j)

    return FDAlgebra((spec.m - spec.n, 0), hom, comp, spec.field,
                     "B(%d,%d)" % (spec.m, spec.n))


def b_from_algebra(A: QuadraticZAlgebra, lo: int, hi: int) -> FDAlgebra:
    """The window A_{[lo,hi]} as a finite-dimensional algebra."""

    def hom(i, j):
        if j < i:
            return BasedSpace((), A.field)
        return A.piece_space(i, j)

    def comp(i, j, k, g, f):
        return A.compose(i, j, k, g, f)

    return FDAlgebra((lo, hi), hom, comp, A.field, A.name + "[%d,%d]" % (lo, hi))


# ---------------------------------------------------------------------------
# comparison


def _phi(A: QuadraticZAlgebra, spec: NgrSpec, i, j):
    """Images in S^{j-i} V^* of the normal words of A_{ij} (all letters are V^*)."""
    Vd = spec.V().dual()
    S = sym(Vd, j - i)
    cols = []
    for w in A.words(i, j):
        cols.append({S.position(tuple(sorted(w))): 1})
    return cols


def compare_with_geometry(A: QuadraticZAlgebra, B: FDAlgebra, spec: NgrSpec) -> Certificate:
    """
    Identify A_{i,i+1} with hom(i,i+1) = V^* on the window [m-n, 0] and check
    that the induced map of every piece is well defined and bijective.

    Well defined: the word map Phi respects left multiplication by generators,
    Phi(x . b) = x * Phi(b).  Bijective: rank of Phi equals both dimensions.
    """
    lo, hi = B.objects
    window = (lo, hi)
    data = []
    for i in range(lo, hi + 1):
        for j in range(i, hi + 1):
            da, db = A.piece_dim(i, j), B.hom(i, j).dim
            if da != db:
                return Certificate("geometry", window, False,
                                   {"i": i, "j": j, "dim_A": da, "dim_B": db})
            if j == i:
                continue
            try:
                phi = _phi(A, spec, i, j)
            except (KeyError, ValueError):
                return Certificate("geometry", window, False,
                                   {"i": i, "j": j, "reason": "non-V* generator in window"})
            img = kernel_image(LinMap(BasedSpace(range(da), A.field), B.hom(i, j), phi))[1]
            if img.dim != db:
                return Certificate("geometry", window, False,
                                   {"i": i, "j": j, "reason": "not bijective", "rank": img.dim})
            if j - i >= 2:
                prev = _phi(A, spec, i, j - 1)
                ng = A.gen(j - 1).dim
                for x in range(ng):
                    for b in range(len(prev)):
                        left = {}
                        for t, c in A.act(i, j - 1, x, {b: 1}).items():
                            for s, z in phi[t].items():
                                left[s] = left.get(s, 0) + c * z
                        left = {s: z for s, z in left.items() if z}
                        right = B.compose(i, j - 1, j, {x: 1}, prev[b])
                        if left != right:
                            return Certificate("geometry", window, False,
                                               {"i": i, "j": j, "reason": "composition",
                                                "generator": x, "basis": b})
            data.append({"i": i, "j": j, "dim": da})
    return Certificate("geometry", window, True, {}, {"pieces": data})
