"""
k-points of NGr(m, V), the resolution of O_{P(W)}, its Ext algebra, and the
quadratic presentation of the completed local ring at the point x_W.

A subspace W is given by rows spanning it in the coordinates of V.  The
complement U is spanned by the coordinate vectors at the non-pivot columns of
W's echelon form unless given explicitly; the dual basis of (V/W)^* = W^perp
is then xi_j = e_j^* - sum_s w_s[j] e_{q_s}^*.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .exactla import (BasedSpace, Echelon, LinMap, StructuralError, Subspace, iadd,
                      kernel_image, quotient_space, rank_of)
from .helix import HomComplex, ProjComplex, compose_maps
from .multilinear import ext, shuffle_sign, sym
from .ngrass import NgrSpec, build_b_algebra, build_ngr
from .zalg import Certificate, koszulity_check, make_quadratic


# ---------------------------------------------------------------------------
# subspaces


class SubspaceW:
    def __init__(self, spec: NgrSpec, rows: Sequence[Sequence], complement: Optional[Sequence[Sequence]] = None):
        f = spec.field
        V = spec.V()
        self.spec = spec
        vecs = []
        for r in rows:
            if len(r) != spec.n:
                raise StructuralError("subspace row has %d entries, dim V = %d" % (len(r), spec.n))
            vecs.append({j: f.coerce(x) for j, x in enumerate(r) if f.coerce(x)})
        sub = Subspace(V, vecs)
        if sub.dim != len(rows) or sub.dim == 0:
            raise StructuralError("subspace rows are degenerate (rank %d of %d)" % (sub.dim, len(rows)))
        self.sub = sub
        self.d = sub.dim
        self.rows = list(sub.rows)          # echelon basis w_1 .. w_d
        self.pivots = sub.pivots
        if complement is None:
            U = [{j: 1} for j in range(spec.n) if j not in set(self.pivots)]
        else:
            U = [{j: f.coerce(x) for j, x in enumerate(r) if f.coerce(x)} for r in complement]
            if rank_of(self.rows + U, f) != spec.n or len(U) != spec.n - self.d:
                raise StructuralError("complement does not split V = W + U")
        self.U = U
        # dual bases: xi_a vanish on W with xi_a(u_b) = delta; mu_s vanish on U with mu_s(w_t) = delta
        basis = self.rows + self.U
        inv = _invert(basis, spec.n, f)          # inv[i] = functional dual to basis[i]
        self.mu = inv[:self.d]
        self.xi = inv[self.d:]

    @property
    def codim(self):
        return self.spec.n - self.d


def _invert(basis, n, f):
    """Dual basis functionals (as coordinate dicts on V^*) of a basis of V."""
    ech = Echelon(f)
    for i, v in enumerate(basis):
        w = dict(v)
        w[n + i] = 1
        ech.add(w)
    ech.back_substitute()
    # row with pivot j (j < n) reads: e_j = sum_i c_i basis_i  (tags)
    coeff = {}
    for j in range(n):
        row = ech.rows[j]
        coeff[j] = {k - n: x for k, x in row.items() if k >= n}
    # functional i takes e_j to coeff[j][i]
    return [{j: coeff[j][i] for j in range(n) if coeff[j].get(i)} for i in range(n)]


# ---------------------------------------------------------------------------
# the point functor


@dataclass
class PointData:
    window: Tuple[int, int]
    dims: Dict[int, int]
    action: Dict[int, List[List[dict]]]        # action[i][x][f] = x . f in F(i+1)
    certificates: List[Certificate] = dc_field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.certificates)


@dataclass
class Rejection:
    reason: str
    witness: Dict


def point_functor(spec: NgrSpec, W: SubspaceW, window=(-4, 4), A=None):
    """
    F(0) = k and F(-1) = W with the evaluation action; F(l) for l > 0 is the
    cokernel of rel(l-2) (x) F(l-2) -> gen(l-1) (x) F(l-1), and for l < -1 the
    kernel at the left end of the twisted Koszul complex from l + p.
    """
    A = A or build_ngr(spec)
    f = spec.field
    mod = f.mod
    lo, hi = window
    if not (lo <= -1 and hi >= 0):
        raise StructuralError("window must contain -1 and 0")
    dims = {0: 1, -1: W.d}
    action: Dict[int, List[List[dict]]] = {}
    # V^* (x) W -> k: evaluation e_x^*(w_s)
    action[-1] = [[({0: W.rows[s][x]} if W.rows[s].get(x) else {}) for s in range(W.d)]
                  for x in range(spec.n)]
    for l in range(1, hi + 1):
        g = A.gen(l - 1).dim
        dF = dims[l - 1]
        gp = A.gen(l - 2).dim
        rels = []
        for r in A.rel(l - 2).rows:
            for b in range(dims[l - 2]):
                v = {}
                for idx, c in r.items():
                    y, x = divmod(idx, gp)
                    for t, z in action[l - 2][x][b].items():
                        iadd(v, {y * dF + t: c * z}, 1, mod)
                rels.append(v)
        amb = BasedSpace(range(g * dF), f)
        Q, proj = quotient_space(amb, Subspace(amb, rels))
        dims[l] = Q.dim
        action[l - 1] = [[proj.cols[x * dF + b] for b in range(dF)] for x in range(g)]
        if Q.dim == 0:
            return Rejection("F(%d)=0" % l, {"index": l, "dim_W": W.d, "m": spec.m})
    p = spec.p
    for l in range(-2, lo - 1, -1):
        res = _backward(A, spec, dims, action, l)
        if isinstance(res, Rejection):
            return res
    data = PointData(window, dims, action)
    data.certificates = _point_certificates(A, spec, data)
    return data


def _backward(A, spec, dims, action, l):
    """F(l) = ker(A^{!*}_{t,l+1} (x) F(l+1) -> A^{!*}_{t,l+2} (x) F(l+2)) with t = l + p."""
    f = spec.field
    mod = f.mod
    p = spec.p
    t = l + p
    L1 = t - l - 1                      # length of A^{!*}_{t,l+1}
    b1 = A.coexpansion(t, L1)
    b2 = A.coexpansion(t, L1 - 1)
    om = A.coexpansion(t, L1 + 1)
    if len(om) != 1:
        return Rejection("top coexpansion not one-dimensional", {"index": l})
    F1, F2 = dims[l + 1], dims[l + 2]
    g1 = A.gen(l + 1).dim
    # the map beta (x) f -> sum w gamma (x) (x . f)
    cols = []
    for w in b1:
        for fv in range(F1):
            v = {}
            for idx, c in w.items():
                gam, x = divmod(idx, g1)
                for s, z in action[l + 1][x][fv].items():
                    iadd(v, {gam * F2 + s: c * z}, 1, mod)
            cols.append(v)
    M = LinMap(BasedSpace(range(len(b1) * F1), f), BasedSpace(range(max(1, len(b2) * F2)), f), cols)
    K = kernel_image(M)[0]
    # omega = sum_x alpha_x (x) x
    g = A.gen(l).dim
    alpha = [dict() for _ in range(g)]
    for idx, c in om[0].items():
        beta, x = divmod(idx, g)
        alpha[x][beta] = c
    # express kernel vectors as sum_x alpha_x (x) f_x
    n1 = len(b1)
    ech = Echelon(f)
    N = n1 * F1
    for x in range(g):
        for fv in range(F1):
            v = {b * F1 + fv: c for b, c in alpha[x].items()}
            v[N + x * F1 + fv] = 1
            if not ech.add(v):
                return Rejection("coexpansion components are dependent", {"index": l})
    act = [[None] * K.dim for _ in range(g)]
    for k, kv in enumerate(K.rows):
        rest = ech.reduce(kv)
        if any(c < N for c in rest):
            return Rejection("kernel not in the span of the top coexpansion", {"index": l})
        for x in range(g):
            act[x][k] = {}
        for c, z in rest.items():
            x, fv = divmod(c - N, F1)
            act[x][k][fv] = (-z) % mod if mod else -z
    dims[l] = K.dim
    action[l] = act
    if K.dim == 0:
        return Rejection("F(%d)=0" % l, {"index": l})
    return None


def _apply_action(action, mod, i, x, v):
    out = {}
    for b, c in v.items():
        iadd(out, action[i][x][b], c, mod)
    return out


def _point_certificates(A, spec, data: PointData):
    f = spec.field
    mod = f.mod
    lo, hi = data.window
    certs = []
    zero = [i for i in range(lo, hi + 1) if data.dims.get(i, 0) == 0]
    certs.append(Certificate("point_nonzero", data.window, not zero,
                             {"zero_at": zero} if zero else {}, {"dims": _sdict(data.dims)}))
    # relations act by zero
    bad = None
    for i in range(lo, hi - 1):
        gp = A.gen(i).dim
        for r in A.rel(i).rows:
            for b in range(data.dims[i]):
                v = {}
                for idx, c in r.items():
                    y, x = divmod(idx, gp)
                    w = _apply_action(data.action, mod, i, x, {b: 1})
                    iadd(v, _apply_action(data.action, mod, i + 1, y, w), c, mod)
                if v:
                    bad = {"i": i, "basis": b}
                    break
            if bad:
                break
        if bad:
            break
    certs.append(Certificate("point_relations", data.window, bad is None, bad or {}))
    # twisted Koszul complexes K_l (x) F, exact except at the right end
    tested = []
    failure = None
    for l in range(lo, hi + 1):
        Lmax = 0
        while A.coexpansion(l, Lmax + 1):
            Lmax += 1
        if l - Lmax < lo:
            continue
        ks = list(range(l - Lmax, l + 1))
        ranks = {}
        dims = {}
        for k in ks:
            dims[k] = len(A.coexpansion(l, l - k)) * data.dims[k]
        for k in ks[:-1]:
            beta = A.coexpansion(l, l - k)
            g = A.gen(k).dim
            Fk1 = data.dims[k + 1]
            cols = []
            for w in beta:
                for fv in range(data.dims[k]):
                    v = {}
                    for idx, c in w.items():
                        gam, x = divmod(idx, g)
                        for s, z in data.action[k][x][fv].items():
                            iadd(v, {gam * Fk1 + s: c * z}, 1, mod)
                    cols.append(v)
            ranks[k] = rank_of(cols, f)
        hom = {k - l: dims[k] - ranks.get(k, 0) - ranks.get(k - 1, 0) for k in ks}
        tested.append({"l": l, "homology": [hom[k - l] for k in ks]})
        inner = {t: h for t, h in hom.items() if t < 0 and h}
        if inner and failure is None:
            t = min(inner)
            failure = {"l": l, "degree": t, "homology": inner[t]}
    certs.append(Certificate("point_koszul_exact", data.window, failure is None, failure or {},
                             {"tested": tested}))
    return certs


def _sdict(d):
    return {str(k): v for k, v in sorted(d.items())}


# ---------------------------------------------------------------------------
# resolution of O_{P(W)}


def point_resolution(spec: NgrSpec, W: SubspaceW, B=None) -> ProjComplex:
    """Lambda^{-i}(V/W)^* (x) P_i in degree i, with the Koszul differential in the xi basis."""
    if W.d > spec.m:
        raise StructuralError("point resolution needs dim W <= m")
    B = B or build_b_algebra(spec)
    c = W.codim
    terms = {}
    index = {}
    for i in range(spec.m - spec.n, 1):
        k = -i
        subsets = list(combinations(range(c), k))
        terms[i] = [(i, ("xi", J)) for J in subsets]
        index[i] = {J: n for n, J in enumerate(subsets)}
    diff = {}
    for i in range(spec.m - spec.n, 0):
        D = {}
        for col, (_, (_, J)) in enumerate(terms[i]):
            for pos, a in enumerate(J):
                rest = J[:pos] + J[pos + 1:]
                sign = -1 if pos % 2 else 1
                row = index[i + 1][rest]
                v = {x: sign * y for x, y in W.xi[a].items()}
                cur = D.setdefault((row, col), {})
                iadd(cur, v, 1, spec.field.mod)
        diff[i] = D
    return ProjComplex(B, terms, diff)


# ---------------------------------------------------------------------------
# Ext algebra


@dataclass
class ExtTable:
    dims: List[int]
    expected: List[int]
    products: Dict[str, int] = dc_field(default_factory=dict)


def _phi_blocks(spec, W, M: ProjComplex, t, U_idx, lam):
    """
    Cocycle of degree t for u_{U_idx} (wedge) (x) prod mu_lam: contract the u's
    into xi_J and multiply by the product of the mu's.
    """
    mod = spec.field.mod
    Vd = spec.V().dual()
    S = sym(Vd, t)
    # product of mu's in S^t V^*
    poly = {(): 1}
    for s in lam:
        new = {}
        for mono, c in poly.items():
            for x, z in W.mu[s].items():
                key = tuple(sorted(mono + (x,)))
                new[key] = new.get(key, 0) + c * z
        poly = {k: v for k, v in new.items() if v}
    vec = {S.position(k): v for k, v in poly.items()}
    blocks = {}
    for i in M.degrees():
        if i + t not in M.terms:
            continue
        blk = {}
        tgt = {J: n for n, (_, (_, J)) in enumerate(M.terms[i + t])}
        for col, (_, (_, J)) in enumerate(M.terms[i]):
            # iterated contraction: remove U_idx[0] first, then U_idx[1], ...
            cur = {J: 1}
            for a in U_idx:
                nxt = {}
                for K, c in cur.items():
                    if a in K:
                        pos = K.index(a)
                        rest = K[:pos] + K[pos + 1:]
                        nxt[rest] = nxt.get(rest, 0) + (-c if pos % 2 else c)
                cur = {K: c for K, c in nxt.items() if c}
            for K, c in cur.items():
                row = tgt[K]
                w = {x: c * y for x, y in vec.items()}
                if mod:
                    w = {x: y % mod for x, y in w.items() if y % mod}
                if w:
                    blk[row, col] = w
        if blk:
            blocks[i] = blk
    return blocks


def ext_algebra(spec: NgrSpec, W: SubspaceW, B=None):
    """
    Ext^*(M, M) for the resolution M of O_{P(W)}: dims from homology of the
    endomorphism Hom complex, compared with dim Lambda^t(V/W) dim S^t W^*;
    the explicit contraction cocycles must give a basis in each degree and
    multiply like the wedge (x) symmetric product, up to a sign depending only
    on the two degrees.
    """
    if W.d > spec.m:
        raise StructuralError("Ext algebra needs dim W <= m")
    B = B or build_b_algebra(spec)
    M = point_resolution(spec, W, B)
    H = HomComplex(M, M)
    hd = H.homology_dims()
    top = spec.n - spec.m
    dims = [hd.get(t, 0) for t in range(0, top + 1)]
    expected = [comb(W.codim, t) * comb(W.d + t - 1, t) for t in range(0, top + 1)]
    extra = {t: h for t, h in hd.items() if t < 0 or t > top}
    certs = []
    ok = dims == expected and not extra
    certs.append(Certificate("ext_dims", (0, top), ok,
                             {} if ok else {"dims": dims, "expected": expected,
                                            "outside": _sdict(extra)}))
    # explicit cocycles
    gens = {}
    basis_ok = True
    witness = {}
    for t in range(0, top + 1):
        labels = [(U_idx, lam) for U_idx in combinations(range(W.codim), t)
                  for lam in _multisets(W.d, t)]
        vecs = []
        for U_idx, lam in labels:
            blocks = _phi_blocks(spec, W, M, t, U_idx, lam)
            v = H.from_blocks(t, blocks)
            if H.D(t)(v):
                basis_ok = False
                witness = {"degree": t, "reason": "not a cocycle", "label": [list(U_idx), list(lam)]}
                break
            vecs.append(v)
        if not basis_ok:
            break
        bnd = H.boundary_echelon(t)
        red = [bnd.reduce(v) for v in vecs]
        rk = rank_of(red, spec.field)
        if rk != len(labels) or rk != dims[t]:
            basis_ok = False
            witness = {"degree": t, "reason": "cocycles not a basis", "rank": rk}
            break
        gens[t] = (labels, vecs, bnd)
    certs.append(Certificate("ext_cocycles", (0, top), basis_ok, witness))
    mod = spec.field.mod
    products = {}
    prod_ok = basis_ok
    pw = {}
    if basis_ok:
        for a in range(1, top + 1):
            for b in range(1, top + 1 - a):
                sign = None
                la, va, _ = gens[a]
                lb, vb, _ = gens[b]
                lc, vc, bnd = gens[a + b]
                for (Ua, ma), x in zip(la, va):
                    for (Ub, mb), y in zip(lb, vb):
                        # y o x : first x (degree a) then y (degree b)
                        comp = compose_maps(M, M, M, H.to_blocks(b, y), b, H.to_blocks(a, x), a)
                        got = bnd.reduce(H.from_blocks(a + b, comp))
                        s = shuffle_sign(Ua + Ub)
                        if s == 0:
                            want = {}
                        else:
                            key = (tuple(sorted(Ua + Ub)), tuple(sorted(ma + mb)))
                            want = bnd.reduce(_scaled(vc[lc.index(key)], s, mod))
                        if not want:
                            if got:
                                prod_ok = False
                                pw = {"a": a, "b": b, "reason": "expected zero product"}
                            continue
                        for eps in ((1, -1) if sign is None else (sign,)):
                            if _scaled(want, eps, mod) == got:
                                sign = eps
                                break
                        else:
                            prod_ok = False
                            pw = {"a": a, "b": b, "reason": "product mismatch",
                                  "left": [list(Ub), list(mb)], "right": [list(Ua), list(ma)]}
                        if not prod_ok:
                            break
                    if not prod_ok:
                        break
                products["%d*%d" % (a, b)] = sign if sign is not None else 0
                if not prod_ok:
                    break
            if not prod_ok:
                break
    if basis_ok:
        certs.append(Certificate("ext_products", (0, top), prod_ok, pw, {"signs": products}))
    return ExtTable(dims, expected, products), certs


def _scaled(v, c, mod):
    if mod:
        return {k: (c * z) % mod for k, z in v.items() if (c * z) % mod}
    return {k: c * z for k, z in v.items() if c * z}


def _multisets(d, t):
    from itertools import combinations_with_replacement
    return list(combinations_with_replacement(range(d), t))


# ---------------------------------------------------------------------------
# local ring


@dataclass
class LocalRingPresentation:
    generators: List[str]
    relations: Subspace
    rel1: List[dict]
    rel2: List[dict]
    hilbert: List[int]


def tangent_dimension(spec: NgrSpec, W: SubspaceW) -> int:
    if W.d != spec.m:
        raise StructuralError("tangent dimension is defined here for dim W = m")
    return W.codim * W.d


def c_algebra(spec: NgrSpec, W: SubspaceW):
    """Generators (V/W) (x) W^* = U (x) W^*, relations = kernel of the product into Lambda^2 U (x) S^2 W^*."""
    f = spec.field
    c, d = W.codim, W.d
    C1 = BasedSpace(["u%d|w%d*" % (i + 1, j + 1) for i in range(c) for j in range(d)], f, "C1")
    L2 = list(combinations(range(c), 2))
    S2 = list(combinations_with_replacement_(d))
    C2 = BasedSpace(range(len(L2) * len(S2)), f)
    n1 = c * d
    cols = []
    for y in range(n1):
        for x in range(n1):
            (i, j), (k, l) = divmod(y, d), divmod(x, d)
            s = shuffle_sign((i, k))
            if s == 0:
                cols.append({})
                continue
            a = L2.index(tuple(sorted((i, k))))
            b = S2.index(tuple(sorted((j, l))))
            cols.append({a * len(S2) + b: s})
    mu = LinMap(C1.tensor(C1), C2, cols)
    ker, img, rk = kernel_image(mu)
    return C1, mu, ker, img.dim


def combinations_with_replacement_(d):
    from itertools import combinations_with_replacement
    return combinations_with_replacement(range(d), 2)


def local_ring(spec: NgrSpec, W: SubspaceW, koszul_window=None):
    if W.d != spec.m:
        raise StructuralError("local ring presentation requires dim W = m")
    f = spec.field
    c, d = W.codim, W.d
    C1, mu, I, dimC2 = c_algebra(spec, W)
    X = C1.dual()
    XX = X.tensor(X)
    n1 = c * d
    R = I.annihilator()
    R = Subspace(XX, [dict(r) for r in R.rows])

    def x(i, j):
        return i * d + j

    def comm(a, b):
        """[a, b] for linear forms a, b given as dicts on generators."""
        v = {}
        for p, s in a.items():
            for q, t in b.items():
                iadd(v, {p * n1 + q: s * t}, 1, f.mod)
                iadd(v, {q * n1 + p: -s * t}, 1, f.mod)
        return v

    rel1 = [comm({x(i, j): 1}, {x(l, j): 1}) for i in range(c) for l in range(i + 1, c) for j in range(d)]
    rel2 = [comm({x(i, j): 1, x(i, k): 1}, {x(l, j): 1, x(l, k): 1})
            for i in range(c) for l in range(i + 1, c) for j in range(d) for k in range(j + 1, d)]
    span = Subspace(XX, rel1 + rel2)
    certs = []
    ok = span == R
    certs.append(Certificate("local_ring_relations", (0, 2), ok,
                             {} if ok else {"dim_R": R.dim, "dim_span": span.dim},
                             {"dim_R": R.dim, "rel1": len(rel1), "rel2": len(rel2),
                              "dim_C1xC1": n1 * n1, "dim_C2": dimC2}))
    Cz = make_quadratic([C1], [I], period=1, name="C")
    kw = koszul_window or (0, spec.n - spec.m + 3)
    kc = koszulity_check(Cz, kw)
    certs.append(Certificate("local_ring_koszul", kc.window, kc.passed, kc.witness, kc.data))
    D = Cz.dual()
    hilbert = [D.piece_dim(0, -t) for t in range(0, kw[1] - kw[0] + 1)]
    gens = ["x%d%d" % (i + 1, j + 1) for i in range(c) for j in range(d)]
    return LocalRingPresentation(gens, R, rel1, rel2, hilbert), certs
