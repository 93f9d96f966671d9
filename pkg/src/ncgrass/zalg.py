"""
Quadratic Z-algebras: graded pieces, quadratic duals, Koszul complexes and
bounded-window certificates.

Conventions
-----------
A positively oriented algebra has generators ``gen(i) = A_{i,i+1}`` and
relations ``rel(i)`` inside ``gen(i+1) (x) gen(i)``.  Tensor strings are written
right to left, ``A_{j-1,j} (x) ... (x) A_{i,i+1}``, and a tensor index puts the
leftmost factor first: ``(y, x) -> y * dim(right) + x``.

A negatively oriented algebra is stored as its positive mirror
``B_{a,b} = A_{-a,-b}``; that is a relabelling only, composition is unchanged.

Pieces are built one generator at a time::

    A_{m,k+1} = gen(k) (x) A_{m,k}  /  image(rel(k-1) (x) A_{m,k-1})

and the quotient basis is the set of non-pivot columns of the (leftmost
pivot) echelon form, i.e. normal words.  ``piece_presentation`` computes the
same piece as a quotient of the whole tensor string and is used as the
independent check.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .exactla import (BasedSpace, ComplexOfSpaces, Echelon, LinMap, StructuralError,
                      Subspace, Tensor, iadd, kernel_image, quotient_space, rank_of)


class BudgetExceeded(RuntimeError):
    """A piece computation would exceed the configured size budget."""

    def __init__(self, what, size, budget):
        super().__init__("%s needs an ambient of dimension %d > budget %d" % (what, size, budget))
        self.what = what
        self.size = size
        self.budget = budget


DEFAULT_BUDGET = 5_000_000


@dataclass
class Certificate:
    name: str
    window: Tuple[int, int]
    passed: bool
    witness: Dict = dc_field(default_factory=dict)
    data: Dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if not self.passed and not self.witness:
            raise ValueError("a failing certificate needs a witness")

    def as_dict(self):
        return {"name": self.name, "window": list(self.window),
                "verdict": "pass" if self.passed else "fail",
                "witness": self.witness, "data": self.data}


def swap_tensor(sub: Subspace, left: BasedSpace, right: BasedSpace) -> Subspace:
    """S : left (x) right -> right (x) left applied to a subspace."""
    dl, dr = left.dim, right.dim
    amb = right.tensor(left)
    rows = []
    for r in sub.rows:
        rows.append({(i % dr) * dl + i // dr: c for i, c in r.items()})
    return Subspace(amb, rows)


# ---------------------------------------------------------------------------
# piece engine


class _Level:
    """A_{m,m+L}: basis of normal words and left multiplication from the previous level."""

    __slots__ = ("dim", "words", "lmul", "relrank", "ambient")

    def __init__(self, words, lmul, relrank=0, ambient=0):
        self.words = words
        self.dim = len(words)
        self.lmul = lmul          # lmul[x * dim(prev) + b] -> vector here
        self.relrank = relrank    # rank of rel (x) A_{m,k-1} -> gen (x) A_{m,k}
        self.ambient = ambient


class QuadraticZAlgebra:
    """
    A quadratic Z-algebra given by generator spaces and relation subspaces.

    Periodic data: ``generators`` and ``relations`` are lists indexed by
    residue mod ``period``.  Finite data: dicts keyed by index, defined on
    ``window = (lo, hi)`` (generators on [lo, hi-1], relations on [lo, hi-2]).
    """

    def __init__(self, generators, relations, orientation="positive", period=None,
                 window=None, name="", budget=DEFAULT_BUDGET):
        if orientation not in ("positive", "negative"):
            raise StructuralError("orientation must be positive or negative")
        self.orientation = orientation
        self.period = period
        self.name = name
        self.budget = budget
        if period is not None:
            if period < 1 or len(generators) != period or len(relations) != period:
                raise StructuralError("periodic data must have exactly `period` entries")
            self._gens = list(generators)
            self._rels = list(relations)
            self.window = None
        else:
            if window is None:
                raise StructuralError("non-periodic algebras need a window")
            lo, hi = window
            self.window = (lo, hi)
            self._gens = dict(generators)
            self._rels = dict(relations)
            for i in range(lo, hi):
                if i not in self._gens:
                    raise StructuralError("missing generator space at %d" % i)
            for i in range(lo, hi - 1):
                if i not in self._rels:
                    raise StructuralError("missing relation space at %d" % i)
        fields = {g.field for g in self._iter_gens()}
        if len(fields) > 1:
            raise StructuralError("generator spaces over different fields")
        self.field = fields.pop() if fields else None
        self._validate()
        self._chains: Dict[int, List[_Level]] = {}
        self._cochains: Dict[int, List[dict]] = {}
        self._dual = None

    def _iter_gens(self):
        return self._gens if isinstance(self._gens, list) else self._gens.values()

    def _rel_slots(self):
        if self.period is not None:
            return range(self.period)
        lo, hi = self.window
        return range(lo, hi - 1)

    def _validate(self):
        for i in self._rel_slots():
            amb = self.gen(i + 1).tensor(self.gen(i))
            if self.rel(i).ambient != amb:
                raise StructuralError("relation at %d does not sit in gen(%d) (x) gen(%d)" % (i, i + 1, i))

    # raw data on the positive (mirror) indexing
    def gen(self, i) -> BasedSpace:
        if self.period is not None:
            return self._gens[i % self.period]
        if not self.window[0] <= i < self.window[1]:
            raise StructuralError("generator index %d outside window %s" % (i, self.window))
        return self._gens[i]

    def rel(self, i) -> Subspace:
        if self.period is not None:
            return self._rels[i % self.period]
        if not self.window[0] <= i < self.window[1] - 1:
            raise StructuralError("relation index %d outside window %s" % (i, self.window))
        return self._rels[i]

    def _key(self, m):
        return m % self.period if self.period is not None else m

    def _check_range(self, i, j):
        if j < i:
            raise StructuralError("piece (%d,%d) has j < i on the positive side" % (i, j))
        if self.window is not None and not (self.window[0] <= i and j <= self.window[1]):
            raise StructuralError("piece (%d,%d) outside window %s" % (i, j, self.window))

    # -- incremental construction --------------------------------------
    def _chain(self, m, length, full=True) -> List[_Level]:
        """Levels 0..length of the chain from m; the top one may be light (dims only)."""
        self._check_range(m, m + length)
        key = self._key(m)
        ch = self._chains.get(key)
        if ch is None:
            ch = self._chains[key] = [_Level([()], [None])]
        top = len(ch) - 1
        if ch[top].words is None and (length > top or (length == top and full)):
            ch.pop()
        while len(ch) <= length:
            light = not full and len(ch) == length
            ch.append(self._next_level(m, ch, light))
        return ch

    def _next_level(self, m, ch, light=False) -> _Level:
        L = len(ch) - 1              # current top: A_{m,k} with k = m + L
        k = m + L
        g = self.gen(k).dim
        prev = ch[L]
        d = prev.dim
        N = g * d
        if N > self.budget:
            raise BudgetExceeded("piece A(%d,%d)" % (m, k + 1), N, self.budget)
        if L == 0:
            return _Level([(x,) for x in range(g)], [{x: 1} for x in range(g)], 0, g)
        rel = self.rel(k - 1)
        gp = self.gen(k - 1).dim
        d2 = ch[L - 1].dim
        mod = self.field.mod
        ech = Echelon(self.field)
        lm = prev.lmul
        for r in rel.rows:
            split = [(idx // gp, idx % gp, c) for idx, c in r.items()]
            for b in range(d2):
                v = {}
                for y, x, c in split:
                    off = y * d
                    for t, z in lm[x * d2 + b].items():
                        key = off + t
                        w = v.get(key, 0) + c * z
                        if mod:
                            w %= mod
                        if w:
                            v[key] = w
                        else:
                            v.pop(key, None)
                if v:
                    ech.add(v)
        if light:
            lvl = _Level((), None, ech.rank, N)
            lvl.words = None
            lvl.dim = N - ech.rank
            return lvl
        ech.back_substitute()
        rows = ech.rows
        pos = {}
        words = []
        pw = prev.words
        for j in range(N):
            if j not in rows:
                pos[j] = len(words)
                words.append((j // d,) + pw[j % d])
        lmul = []
        for j in range(N):
            if j in pos:
                lmul.append({pos[j]: 1})
            else:
                row = rows[j]
                if mod:
                    lmul.append({pos[c]: (-x) % mod for c, x in row.items() if c != j})
                else:
                    lmul.append({pos[c]: -x for c, x in row.items() if c != j})
        return _Level(words, lmul, ech.rank, N)

    # -- public piece access on positive indexing ------------------------
    def _pdim(self, i, j):
        return self._chain(i, j - i, full=False)[j - i].dim

    def piece_dim(self, i, j) -> int:
        """dim A_{ij} in the algebra's own orientation."""
        if self.orientation == "negative":
            if i < j:
                return 0
            return self._pdim(-i, -j)
        if j < i:
            return 0
        return self._pdim(i, j)

    def words(self, i, j):
        return self._chain(i, j - i)[j - i].words

    def act(self, m, k, x, v):
        """Left-multiply generator ``x`` of gen(k) onto ``v`` in A_{m,k}."""
        ch = self._chain(m, k + 1 - m)
        lvl = ch[k + 1 - m]
        d = ch[k - m].dim
        mod = self.field.mod
        out = {}
        for b, c in v.items():
            iadd(out, lvl.lmul[x * d + b], c, mod)
        return out

    def word_vector(self, m, word) -> dict:
        """Image in A_{m, m+len} of a tensor-string word (leftmost letter last applied)."""
        v = {0: 1}
        k = m
        for x in reversed(word):
            v = self.act(m, k, x, v)
            k += 1
            if not v:
                return {}
        return v

    def compose(self, m, c, e, u, v):
        """u in A_{c,e}, v in A_{m,c}  ->  u v in A_{m,e} (positive indexing)."""
        ws = self.words(c, e)
        mod = self.field.mod
        out = {}
        for s, a in u.items():
            w = v
            k = c
            for x in reversed(ws[s]):
                w = self.act(m, k, x, w)
                k += 1
                if not w:
                    break
            if w:
                iadd(out, w, a, mod)
        return out

    def piece_space(self, i, j) -> BasedSpace:
        """Basis labels are the normal words (tuples of generator labels)."""
        ws = self.words(i, j)
        labels = []
        for w in ws:
            labels.append(Tensor(self.gen(j - 1 - t).labels[x] for t, x in enumerate(w)))
        return BasedSpace(labels, self.field, "A(%d,%d)" % (i, j))

    def relation_rank(self, i, j):
        return self._chain(i, j - i, full=False)[j - i].relrank

    def dual(self) -> "QuadraticZAlgebra":
        if self._dual is None:
            self._dual = quadratic_dual(self)
        return self._dual

    # -- coexpansion -----------------------------------------------------
    def coexpansion(self, l, L):
        """
        A^{!*}_{l,l-L} as a list of coordinate vectors over
        ``A^{!*}_{l,l-L+1} (x) gen(l-L)`` (index ``gamma * dim gen + x``).
        """
        key = self._key(l)
        co = self._cochains.get(key)
        if co is None:
            co = self._cochains[key] = [[{}], [{x: 1} for x in range(self.gen(l - 1).dim)]]
        while len(co) <= L:
            co.append(self._next_co(l, co))
        return co[L]

    def _next_co(self, l, co):
        L = len(co) - 1                      # have A^{!*}_{l,k+1} with k+1 = l-L
        k = l - L - 1
        top = co[L]
        if not top:
            return []
        below = co[L - 1]
        g, g1 = self.gen(k).dim, self.gen(k + 1).dim
        ann = self.rel(k).annihilator().rows  # functionals on gen(k+1) (x) gen(k)
        phi_x = [[] for _ in range(g)]
        for a, phi in enumerate(ann):
            for idx, c in phi.items():
                phi_x[idx % g].append((idx // g, a, c))
        na = len(ann)
        mod = self.field.mod
        cols = []
        for gam in top:
            # group the coordinates of gamma by delta
            by_y = {}
            for idx, c in gam.items():
                by_y.setdefault(idx % g1, []).append((idx // g1, c))
            for x in range(g):
                v = {}
                for y, a, c in phi_x[x]:
                    for delta, cg in by_y.get(y, ()):
                        key = delta * na + a
                        w = v.get(key, 0) + cg * c
                        if mod:
                            w %= mod
                        if w:
                            v[key] = w
                        else:
                            v.pop(key, None)
                cols.append(v)
        dom = BasedSpace(range(len(cols)), self.field)
        cod = BasedSpace(range(max(1, len(below)) * na), self.field)
        ker, _, _ = kernel_image(LinMap(dom, cod, cols))
        return list(ker.rows)

    def coexpansion_dim(self, l, k):
        return len(self.coexpansion(l, l - k)) if k <= l else 0


# ---------------------------------------------------------------------------
# constructors


def make_quadratic(generators, relations, orientation="positive", period=None, window=None,
                   name="", budget=DEFAULT_BUDGET) -> QuadraticZAlgebra:
    return QuadraticZAlgebra(generators, relations, orientation, period, window, name, budget)


def quadratic_dual(A: QuadraticZAlgebra) -> QuadraticZAlgebra:
    """
    The dual quadratic algebra, with opposite orientation, returned on its
    mirrored positive indexing: gen'(a) = gen(-a-1)^*, rel'(a) = S(rel(-a-2)^perp).
    """
    orient = "negative" if A.orientation == "positive" else "positive"

    def dual_rel(i):
        return swap_tensor(A.rel(i).annihilator(), A.gen(i + 1).dual(), A.gen(i).dual())

    if A.period is not None:
        p = A.period
        gens = [A.gen(-a - 1).dual() for a in range(p)]
        rels = [dual_rel(-a - 2) for a in range(p)]
        D = QuadraticZAlgebra(gens, rels, orient, period=p, name=A.name + "!", budget=A.budget)
    else:
        lo, hi = A.window
        gens = {a: A.gen(-a - 1).dual() for a in range(-hi, -lo)}
        rels = {a: dual_rel(-a - 2) for a in range(-hi, -lo - 1)}
        D = QuadraticZAlgebra(gens, rels, orient, window=(-hi, -lo), name=A.name + "!",
                              budget=A.budget)
    D._dual = A
    return D


# ---------------------------------------------------------------------------
# full-string presentation (independent route)


@dataclass
class PiecePresentation:
    i: int
    j: int
    string: BasedSpace
    relsum: Subspace
    piece: BasedSpace
    proj: LinMap

    @property
    def dim(self):
        return self.piece.dim


def string_space(A: QuadraticZAlgebra, i, j) -> Tuple[BasedSpace, List[int]]:
    dims = [A.gen(k).dim for k in range(j - 1, i - 1, -1)]
    labels = [Tensor()]
    for k in range(j - 1, i - 1, -1):
        gl = A.gen(k).labels
        labels = [Tensor(tuple(w) + (x,)) for w in labels for x in gl]
    return BasedSpace(labels, A.field, "T(%d,%d)" % (i, j)), dims


def piece_presentation(A: QuadraticZAlgebra, i, j) -> PiecePresentation:
    """A_{ij} as the quotient of the whole tensor string by the sum of shifted relations."""
    A._check_range(i, j)
    T, dims = string_space(A, i, j)
    L = len(dims)
    stride = [1] * L
    for t in range(L - 2, -1, -1):
        stride[t] = stride[t + 1] * dims[t + 1]
    vecs = []
    for t in range(L - 1):
        # factors t, t+1 (left to right) are gen(k+1), gen(k) with k = j-2-t
        k = j - 2 - t
        gl, gr = dims[t], dims[t + 1]
        rows = A.rel(k).rows
        left = dims[:t]
        right = dims[t + 2:]
        nleft = 1
        for x in left:
            nleft *= x
        nright = 1
        for x in right:
            nright *= x
        for a in range(nleft):
            base_a = a * stride[t - 1] if t > 0 else 0
            for r in rows:
                for b in range(nright):
                    v = {}
                    for idx, c in r.items():
                        y, x = divmod(idx, gr)
                        v[base_a + y * stride[t] + x * stride[t + 1] + b] = c
                    vecs.append(v)
    relsum = Subspace(T, vecs)
    Q, proj = quotient_space(T, relsum)
    return PiecePresentation(i, j, T, relsum, Q, proj)


def graded_piece(A: QuadraticZAlgebra, i, j):
    """(space, normal words) of A_{ij} from the incremental engine (positive indexing)."""
    return A.piece_space(i, j)


# ---------------------------------------------------------------------------
# Koszul complexes


@dataclass
class KoszulData:
    target: int
    coexpansion: Dict[int, int]                 # k -> dim A^{!*}_{l,k}
    complexes: Dict[int, ComplexOfSpaces] = dc_field(default_factory=dict)


def _coexp_length(A, l, cap):
    """Length of the nonzero coexpansion from l, stopping at ``cap``."""
    L = 0
    while L < cap:
        if A.window is not None and l - L - 1 < A.window[0]:
            return L
        if not A.coexpansion(l, L + 1):
            return L
        L += 1
    return L


def koszul_differential(A: QuadraticZAlgebra, l, m, k) -> LinMap:
    """K_l^m in degree k-l  ->  degree k-l+1: beta (x) a -> sum w gamma (x) (x . a)."""
    L = l - k
    beta = A.coexpansion(l, L)
    gamma_dim = len(A.coexpansion(l, L - 1))
    ch = A._chain(m, k + 1 - m)
    dk = ch[k - m].dim
    dk1 = ch[k + 1 - m].dim
    lm = ch[k + 1 - m].lmul
    g = A.gen(k).dim
    mod = A.field.mod
    cols = []
    for w in beta:
        split = [(idx // g, idx % g, c) for idx, c in w.items()]
        for a in range(dk):
            v = {}
            for gam, x, c in split:
                off = gam * dk1
                for t, z in lm[x * dk + a].items():
                    key = off + t
                    y = v.get(key, 0) + c * z
                    if mod:
                        y %= mod
                    if y:
                        v[key] = y
                    else:
                        v.pop(key, None)
            cols.append(v)
    dom = BasedSpace(range(len(beta) * dk), A.field)
    cod = BasedSpace(range(gamma_dim * dk1), A.field)
    return LinMap(dom, cod, cols)


def koszul_complex(A: QuadraticZAlgebra, l, sources: Sequence[int]) -> KoszulData:
    """
    K_l^m for each m in ``sources``: terms A^{!*}_{l,k} (x) A_{m,k} in degree
    k - l.  Raises RuntimeError if d o d != 0.
    """
    if A.orientation != "positive":
        raise StructuralError("Koszul complexes are built on positively oriented algebras")
    Lmax = _coexp_length(A, l, l - min(sources, default=l))
    co = {l - L: len(A.coexpansion(l, L)) for L in range(Lmax + 1)}
    data = KoszulData(l, co)
    for m in sources:
        if m > l:
            continue
        ks = [k for k in range(max(m, l - Lmax), l + 1)]
        terms = {}
        diffs = {}
        for k in ks:
            terms[k - l] = BasedSpace(range(co[k] * A._pdim(m, k)), A.field)
        for k in ks[:-1]:
            d = koszul_differential(A, l, m, k)
            diffs[k - l] = LinMap(terms[k - l], terms[k - l + 1], d.cols)
        C = ComplexOfSpaces(terms, diffs)
        bad = C.check_d2()
        if bad is not None:
            raise RuntimeError("Koszul differential squares to nonzero at l=%d m=%d degree %d"
                               % (l, m, bad))
        data.complexes[m] = C
    return data


def _koszul_homology(A, l, m, explicit=False):
    """Homology dims of K_l^m, reusing the two top ranks from the piece construction."""
    Lmax = _coexp_length(A, l, l - m)
    ks = list(range(max(m, l - Lmax), l + 1))
    dims = {k: len(A.coexpansion(l, l - k)) * A._pdim(m, k) for k in ks}
    ranks = {}
    for k in ks[:-1]:
        d = None
        if not explicit and k == l - 1:
            # coexpansion at l-1 is the generator basis: the map is the projection onto A_{m,l}
            ranks[k] = A._pdim(m, l)
        elif not explicit and k == l - 2:
            # coexpansion at l-2 is the canonical basis of rel(l-2): same map as the quotient step
            ranks[k] = A.relation_rank(m, l)
        else:
            d = koszul_differential(A, l, m, k)
            ranks[k] = rank_of(d.cols, A.field)
        if d is not None and k + 1 < l:
            e = koszul_differential(A, l, m, k + 1)
            if not e.compose(LinMap(d.domain, e.domain, d.cols)).is_zero():
                raise RuntimeError("Koszul differential squares to nonzero at l=%d m=%d" % (l, m))
    hom = {k - l: dims[k] - ranks.get(k, 0) - ranks.get(k - 1, 0) for k in ks}
    return hom, dims


def koszulity_check(A: QuadraticZAlgebra, window, explicit=False) -> Certificate:
    """
    Every K_l^m with l != m inside ``window`` must be acyclic.  A piece that
    would exceed the algebra's budget ends the check with a failing verdict.
    """
    lo, hi = window
    if A.orientation == "negative":
        raise StructuralError("run koszulity_check on a positively oriented algebra")
    tested = []
    seen = set()
    for span in range(1, hi - lo + 1):
        for m in range(lo, hi - span + 1):
            l = m + span
            key = (A._key(m), span) if A.period is not None else (m, span)
            if key in seen:
                continue
            seen.add(key)
            try:
                hom, dims = _koszul_homology(A, l, m, explicit)
            except BudgetExceeded as e:
                return Certificate("koszul", window, False,
                                   {"reason": "budget", "l": l, "m": m, "detail": str(e)},
                                   {"tested": tested})
            bad = {t: h for t, h in hom.items() if h}
            tested.append({"l": l, "m": m, "terms": [dims[k] for k in sorted(dims)]})
            if bad:
                t = min(bad)
                return Certificate("koszul", window, False,
                                   {"l": l, "m": m, "degree": t, "homology": bad[t]},
                                   {"tested": tested})
    return Certificate("koszul", window, True, {}, {"tested": tested})


def frobenius_check(A: QuadraticZAlgebra, p_h: int, window) -> Certificate:
    """
    Frobenius property of the dual ``D = A^!`` (D is passed as ``A.dual()`` if
    ``A`` is positive): dim D_{i+p_h,i} = 1, D_{i+p_h+1,i} = 0 and perfect
    pairings D_{j,i} (x) D_{i+p_h,j} -> D_{i+p_h,i}.
    """
    D = A.dual() if A.orientation == "positive" else A
    B = D   # positive mirror storage; D_{s,t} (s >= t) = B_{-s,-t}
    lo, hi = window
    rows = []
    for i in range(lo, hi - p_h + 1):
        a, e = -i - p_h, -i
        top = B._pdim(a, e)
        over = B._pdim(a - 1, e) if (B.window is None or a - 1 >= B.window[0]) else 0
        if top != 1 or over != 0:
            return Certificate("frobenius", window, False,
                               {"i": i, "top_dim": top, "above_top_dim": over})
        for j in range(i + 1, i + p_h):
            c = -j
            du, dv = B._pdim(c, e), B._pdim(a, c)
            if du != dv:
                return Certificate("frobenius", window, False,
                                   {"i": i, "j": j, "dims": [dv, du]})
            gram = []
            for s in range(du):
                row = []
                for t in range(dv):
                    row.append(B.compose(a, c, e, {s: 1}, {t: 1}))
                gram.append({t: w.get(0, 0) for t, w in enumerate(row) if w.get(0, 0)})
            rk = rank_of(gram, B.field)
            if rk != du:
                return Certificate("frobenius", window, False,
                                   {"i": i, "j": j, "gram_rank": rk, "dim": du})
        rows.append({"i": i, "pair_dims": [B._pdim(-(j), e) for j in range(i, i + p_h + 1)]})
    return Certificate("frobenius", window, True, {}, {"checked": rows})


def hilbert_table(A: QuadraticZAlgebra, window) -> List[List[int]]:
    """Row i, column j: dim A_{ij} for i, j in the window (own orientation)."""
    lo, hi = window
    return [[A.piece_dim(i, j) for j in range(lo, hi + 1)] for i in range(lo, hi + 1)]
