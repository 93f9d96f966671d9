"""
Exact linear algebra on finite-dimensional spaces with structured basis labels.

Vectors are sparse dicts ``{index: value}``.  Values are ``int``/``Fraction``
over the rationals, or ints reduced mod ``p`` over a prime field.  A subspace
is always stored in reduced row echelon form with *leftmost* pivots, so two
subspaces are equal iff their row lists are equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from heapq import heapify, heappop, heappush
from typing import Dict, Iterable, List, Optional, Sequence

Vec = Dict[int, object]


class StructuralError(ValueError):
    """Shape, ambient or field mismatch between linear-algebra objects."""


# ---------------------------------------------------------------------------
# fields


def _is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    kind: str = "rationals"
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind == "rationals":
            if self.p is not None:
                raise StructuralError("rationals take no characteristic")
        elif self.kind == "prime":
            if self.p is None or not _is_prime(self.p):
                raise StructuralError("prime field needs a prime p, got %r" % (self.p,))
        else:
            raise StructuralError("unknown field kind %r" % (self.kind,))

    @classmethod
    def parse(cls, text):
        """'rationals' / 'QQ' / 'prime:101'"""
        text = text.strip()
        if text in ("rationals", "QQ", "Q"):
            return QQ
        if text.startswith("prime:"):
            return cls("prime", int(text.split(":", 1)[1]))
        raise StructuralError("cannot parse field %r" % text)

    @property
    def mod(self):
        return self.p

    def coerce(self, x):
        if isinstance(x, str):
            x = Fraction(x)
        if self.p is None:
            if isinstance(x, int):
                return x
            x = Fraction(x)
            return x.numerator if x.denominator == 1 else x
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x):
        if self.p is None:
            if x == 1 or x == -1:
                return x
            return 1 / Fraction(x)
        return pow(x, -1, self.p)

    def div(self, x, y):
        if self.p is None:
            if y == 1:
                return x
            if y == -1:
                return -x
            q = Fraction(x) / y
            return q.numerator if q.denominator == 1 else q
        return x * pow(y, -1, self.p) % self.p

    def render(self, x):
        """Canonical string: 'p/q' in lowest terms (or 'p')."""
        if self.p is None:
            x = Fraction(x)
            return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)
        return str(int(x) % self.p)

    def __str__(self):
        return "rationals" if self.p is None else "prime:%d" % self.p


QQ = FieldSpec()


# ---------------------------------------------------------------------------
# structured labels


class _Label(tuple):
    _tag = "?"

    def __eq__(self, other):
        return type(self) is type(other) and tuple.__eq__(self, other)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self._tag, tuple(self)))

    def __repr__(self):
        return "%s%s" % (type(self).__name__, tuple.__repr__(self))


class Tensor(_Label):
    _tag = "t"

    def __str__(self):
        return "(x)".join(_lstr(l) for l in self) if self else "1"


class Wedge(_Label):
    _tag = "w"

    def __str__(self):
        return "^".join(_lstr(l) for l in self) if self else "1"


class Mono(_Label):
    _tag = "s"

    def __str__(self):
        return "*".join(_lstr(l) for l in self) if self else "1"


class Dual(_Label):
    _tag = "d"

    def __new__(cls, label):
        return tuple.__new__(cls, (label,))

    @property
    def label(self):
        return self[0]

    def __str__(self):
        return "(%s)*" % _lstr(self[0]) if isinstance(self[0], _Label) else "%s*" % self[0]


def _lstr(l):
    if isinstance(l, _Label) and not isinstance(l, Dual) and len(l) > 1:
        return "(%s)" % l
    return str(l)


def dual_label(l):
    return l.label if isinstance(l, Dual) else Dual(l)


# ---------------------------------------------------------------------------
# spaces and maps


class BasedSpace:
    """A vector space with an ordered basis of distinct, hashable labels."""

    def __init__(self, labels: Iterable, field: FieldSpec = QQ, name: str = ""):
        self.labels = tuple(labels)
        self.field = field
        self.name = name
        self._index = None
        self._dual = None
        self._hash = None
        if len(set(self.labels)) != len(self.labels):
            raise StructuralError("basis labels of %r are not distinct" % (name or "space"))

    @property
    def dim(self):
        return len(self.labels)

    def __len__(self):
        return len(self.labels)

    def index(self, label):
        if self._index is None:
            self._index = {l: i for i, l in enumerate(self.labels)}
        return self._index[label]

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, BasedSpace) and self.field == other.field
                and self.labels == other.labels)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.labels))
        return self._hash

    def __repr__(self):
        return "BasedSpace(%s, dim=%d)" % (self.name or "?", self.dim)

    def dual(self):
        if self._dual is None:
            d = BasedSpace([dual_label(l) for l in self.labels], self.field,
                           name=(self.name + "*") if self.name else "")
            d._dual = self
            self._dual = d
        return self._dual

    def tensor(self, other, name=""):
        """Basis ordered lexicographically with the left factor most significant."""
        check_field(self, other)
        labels = [Tensor((a, b)) for a in self.labels for b in other.labels]
        return BasedSpace(labels, self.field, name or "%s(x)%s" % (self.name, other.name))

    def zero_space(self):
        return BasedSpace((), self.field)

    def vector(self, coords: Dict[object, object]) -> Vec:
        """Sparse vector from ``{label: coefficient}``."""
        f = self.field
        out = {}
        for l, c in coords.items():
            c = f.coerce(c)
            if c:
                out[self.index(l)] = c
        return out


def zero_space(field=QQ):
    return BasedSpace((), field)


def line(field=QQ, label="1"):
    return BasedSpace((label,), field)


def check_field(a, b):
    if a.field != b.field:
        raise StructuralError("field mismatch: %s vs %s" % (a.field, b.field))


def vadd(u: Vec, v: Vec, c=1, mod=None) -> Vec:
    """u + c*v as a new dict."""
    out = dict(u)
    for k, x in v.items():
        y = out.get(k, 0) + c * x
        if mod:
            y %= mod
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def vscale(v: Vec, c, mod=None) -> Vec:
    if not c:
        return {}
    if mod:
        return {k: x * c % mod for k, x in v.items()}
    return {k: x * c for k, x in v.items()}


def iadd(u: Vec, v: Vec, c=1, mod=None):
    """u += c*v in place."""
    for k, x in v.items():
        y = u.get(k, 0) + c * x
        if mod:
            y %= mod
        if y:
            u[k] = y
        else:
            u.pop(k, None)


class LinMap:
    """A linear map stored by columns: ``cols[j]`` is the image of basis vector ``j``."""

    def __init__(self, domain: BasedSpace, codomain: BasedSpace, cols: Sequence[Vec]):
        check_field(domain, codomain)
        if len(cols) != domain.dim:
            raise StructuralError("%d columns for a domain of dim %d" % (len(cols), domain.dim))
        self.domain = domain
        self.codomain = codomain
        self.cols = list(cols)

    @property
    def field(self):
        return self.domain.field

    @classmethod
    def from_matrix(cls, domain, codomain, matrix):
        """``matrix`` is dim(codomain) x dim(domain), row-major."""
        f = domain.field
        if len(matrix) != codomain.dim or any(len(r) != domain.dim for r in matrix):
            raise StructuralError("matrix shape does not match %dx%d" % (codomain.dim, domain.dim))
        cols = [{} for _ in range(domain.dim)]
        for i, row in enumerate(matrix):
            for j, x in enumerate(row):
                x = f.coerce(x)
                if x:
                    cols[j][i] = x
        return cls(domain, codomain, cols)

    @classmethod
    def identity(cls, space):
        return cls(space, space, [{j: 1} for j in range(space.dim)])

    @classmethod
    def zero(cls, domain, codomain):
        return cls(domain, codomain, [{} for _ in range(domain.dim)])

    def matrix(self):
        M = [[0] * self.domain.dim for _ in range(self.codomain.dim)]
        for j, col in enumerate(self.cols):
            for i, x in col.items():
                M[i][j] = x
        return M

    def __call__(self, v: Vec) -> Vec:
        mod = self.field.mod
        out = {}
        for j, c in v.items():
            iadd(out, self.cols[j], c, mod)
        return out

    def compose(self, first: "LinMap") -> "LinMap":
        """self o first"""
        if first.codomain != self.domain:
            raise StructuralError("cannot compose: codomain/domain mismatch")
        return LinMap(first.domain, self.codomain, [self(c) for c in first.cols])

    def __matmul__(self, other):
        return self.compose(other)

    def __add__(self, other):
        if self.domain != other.domain or self.codomain != other.codomain:
            raise StructuralError("cannot add maps between different spaces")
        mod = self.field.mod
        return LinMap(self.domain, self.codomain,
                      [vadd(a, b, 1, mod) for a, b in zip(self.cols, other.cols)])

    def scale(self, c):
        c = self.field.coerce(c)
        return LinMap(self.domain, self.codomain, [vscale(v, c, self.field.mod) for v in self.cols])

    def is_zero(self):
        return not any(self.cols)

    def transpose(self) -> "LinMap":
        cols = [{} for _ in range(self.codomain.dim)]
        for j, col in enumerate(self.cols):
            for i, x in col.items():
                cols[i][j] = x
        return LinMap(self.codomain.dual(), self.domain.dual(), cols)

    def tensor(self, other: "LinMap") -> "LinMap":
        """self (x) other on the lexicographic tensor bases."""
        dom = self.domain.tensor(other.domain)
        cod = self.codomain.tensor(other.codomain)
        nb = other.codomain.dim
        mod = self.field.mod
        cols = []
        for ca in self.cols:
            for cb in other.cols:
                v = {}
                for i, x in ca.items():
                    for k, y in cb.items():
                        z = x * y
                        if mod:
                            z %= mod
                        v[i * nb + k] = z
                cols.append(v)
        return LinMap(dom, cod, cols)

    def __eq__(self, other):
        return (isinstance(other, LinMap) and self.domain == other.domain
                and self.codomain == other.codomain and self.cols == other.cols)

    def __repr__(self):
        return "LinMap(%r -> %r)" % (self.domain, self.codomain)


# ---------------------------------------------------------------------------
# echelon engine


class Echelon:
    """
    Incremental semi-echelon basis with leftmost pivots (pivot entry 1).

    Rows are reduced against earlier rows when inserted but earlier rows are
    not back-substituted; :meth:`reduce` is nevertheless a complete reduction
    (the result has no pivot columns) because it sweeps columns in increasing
    order.
    """

    __slots__ = ("field", "mod", "rows")

    def __init__(self, field: FieldSpec = QQ):
        self.field = field
        self.mod = field.mod
        self.rows: Dict[int, Vec] = {}

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self):
        return len(self.rows)

    def reduce(self, v: Vec) -> Vec:
        rows = self.rows
        mod = self.mod
        v = dict(v)
        heap = [c for c in v if c in rows]
        if not heap:
            return v
        heapify(heap)
        while heap:
            c = heappop(heap)
            a = v.get(c)
            if not a:
                continue
            for k, x in rows[c].items():
                old = v.get(k)
                y = (old or 0) - a * x
                if mod:
                    y %= mod
                if y:
                    if old is None and k in rows:
                        heappush(heap, k)
                    v[k] = y
                elif old is not None:
                    del v[k]
        return v

    def add(self, v: Vec) -> bool:
        w = self.reduce(v)
        if not w:
            return False
        piv = min(w)
        a = w[piv]
        if a != 1:
            f = self.field
            w = {k: f.div(x, a) for k, x in w.items()}
        self.rows[piv] = w
        return True

    def extend(self, vs: Iterable[Vec]):
        for v in vs:
            self.add(v)
        return self

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)

    @property
    def pivots(self):
        return sorted(self.rows)

    def back_substitute(self):
        """Bring the stored rows to full RREF in place (pivot columns appear only at their own row)."""
        rows = self.rows
        mod = self.mod
        for c in sorted(rows, reverse=True):
            row = rows[c]
            hits = [k for k in row if k != c and k in rows]
            if not hits:
                continue
            for k in hits:
                a = row.pop(k)
                for j, x in rows[k].items():
                    if j == k:
                        continue
                    y = row.get(j, 0) - a * x
                    if mod:
                        y %= mod
                    if y:
                        row[j] = y
                    else:
                        row.pop(j, None)
        return self

    def rref_rows(self) -> List[Vec]:
        out = []
        for c in sorted(self.rows):
            row = self.rows[c]
            tail = {k: x for k, x in row.items() if k != c}
            tail = self.reduce(tail)
            tail[c] = 1
            out.append(dict(sorted(tail.items())))
        return out


def rank_of(vectors: Iterable[Vec], field: FieldSpec = QQ) -> int:
    return Echelon(field).extend(vectors).rank


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """A subspace of ``ambient`` held by its canonical RREF rows."""

    def __init__(self, ambient: BasedSpace, rows: Sequence[Vec], _canonical=False):
        self.ambient = ambient
        if _canonical:
            self.rows = tuple(rows)
        else:
            self.rows = tuple(Echelon(ambient.field).extend(rows).rref_rows())
        self._ech = None

    @classmethod
    def span(cls, ambient, vectors):
        return cls(ambient, list(vectors))

    @classmethod
    def zero(cls, ambient):
        return cls(ambient, (), _canonical=True)

    @classmethod
    def full(cls, ambient):
        return cls(ambient, [{j: 1} for j in range(ambient.dim)], _canonical=True)

    @classmethod
    def from_echelon(cls, ambient, ech: Echelon):
        s = cls(ambient, ech.rref_rows(), _canonical=True)
        return s

    @property
    def dim(self):
        return len(self.rows)

    @property
    def field(self):
        return self.ambient.field

    @property
    def pivots(self):
        return [min(r) for r in self.rows]

    def echelon(self) -> Echelon:
        if self._ech is None:
            e = Echelon(self.field)
            for r in self.rows:
                e.rows[min(r)] = r
            self._ech = e
        return self._ech

    def reduce(self, v):
        return self.echelon().reduce(v)

    def contains(self, v) -> bool:
        return not self.reduce(v)

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains(r) for r in other.rows)

    def _check(self, other):
        if self.ambient != other.ambient:
            raise StructuralError("subspaces live in different ambient spaces")

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient == other.ambient
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.ambient, len(self.rows)))

    def __repr__(self):
        return "Subspace(dim=%d in %r)" % (self.dim, self.ambient)

    def matrix(self):
        return [[r.get(j, 0) for j in range(self.ambient.dim)] for r in self.rows]

    def __add__(self, other):
        return subspace_algebra(self, other, "sum")

    def __and__(self, other):
        return subspace_algebra(self, other, "intersect")

    def annihilator(self) -> "Subspace":
        """The subspace of ``ambient.dual()`` killing every vector of ``self``."""
        piv = set(self.pivots)
        rows = []
        for f in range(self.ambient.dim):
            if f in piv:
                continue
            v = {f: 1}
            for r in self.rows:
                x = r.get(f)
                if x:
                    v[min(r)] = -x if not self.field.mod else (-x) % self.field.mod
            rows.append(v)
        return Subspace(self.ambient.dual(), rows)

    def basis_map(self) -> LinMap:
        """Inclusion of a space with basis = the RREF rows."""
        dom = BasedSpace(["r%d" % i for i in range(self.dim)], self.field)
        return LinMap(dom, self.ambient, list(self.rows))


def subspace_algebra(a: Subspace, b: Optional[Subspace], op: str) -> Subspace:
    if op == "annihilator":
        return a.annihilator()
    a._check(b)
    if op == "sum":
        return Subspace(a.ambient, list(a.rows) + list(b.rows))
    if op == "intersect":
        s = a.annihilator() + b.annihilator()
        r = s.annihilator()
        return Subspace(a.ambient, r.rows, _canonical=True)
    raise StructuralError("unknown subspace operation %r" % op)


def kernel_image(f: LinMap):
    """Return ``(kernel, image, rank)`` as canonical subspaces."""
    check_field(f.domain, f.codomain)
    M = f.codomain.dim
    ech = Echelon(f.field)
    for j, col in enumerate(f.cols):
        v = dict(col)
        v[M + j] = 1
        ech.add(v)
    img, ker = [], []
    for c, row in ech.rows.items():
        if c < M:
            img.append({k: x for k, x in row.items() if k < M})
        else:
            ker.append({k - M: x for k, x in row.items()})
    return Subspace(f.domain, ker), Subspace(f.codomain, img), len(img)


def rank(f: LinMap) -> int:
    return rank_of(f.cols, f.field)


def quotient_space(ambient: BasedSpace, sub: Subspace):
    """Return ``(quotient, projection)``; the quotient basis is the non-pivot labels."""
    if sub.ambient != ambient:
        raise StructuralError("subspace does not live in the given ambient space")
    piv = set(sub.pivots)
    keep = [j for j in range(ambient.dim) if j not in piv]
    where = {j: i for i, j in enumerate(keep)}
    Q = BasedSpace([ambient.labels[j] for j in keep], ambient.field,
                   name=(ambient.name + "/~") if ambient.name else "")
    mod = ambient.field.mod
    cols = []
    by_pivot = {min(r): r for r in sub.rows}
    for j in range(ambient.dim):
        if j in where:
            cols.append({where[j]: 1})
        else:
            r = by_pivot[j]
            cols.append({where[k]: (-x % mod if mod else -x) for k, x in r.items() if k != j})
    return Q, LinMap(ambient, Q, cols)


# ---------------------------------------------------------------------------
# complexes


@dataclass
class ComplexOfSpaces:
    """Cohomological complex; ``differentials[t]`` maps degree t to t+1."""

    terms: Dict[int, BasedSpace]
    differentials: Dict[int, LinMap] = dc_field(default_factory=dict)

    def __post_init__(self):
        for t, d in self.differentials.items():
            if t not in self.terms or t + 1 not in self.terms:
                raise StructuralError("differential at %d does not connect declared terms" % t)
            if d.domain != self.terms[t] or d.codomain != self.terms[t + 1]:
                raise StructuralError("differential at %d has the wrong shape" % t)

    def d(self, t) -> Optional[LinMap]:
        return self.differentials.get(t)

    def check_d2(self):
        for t, d in self.differentials.items():
            e = self.differentials.get(t + 1)
            if e is not None and not e.compose(d).is_zero():
                return t
        return None

    def degrees(self):
        return sorted(self.terms)

    def ranks(self):
        return {t: rank(d) for t, d in self.differentials.items()}

    def homology_dims(self) -> Dict[int, int]:
        rk = self.ranks()
        return {t: self.terms[t].dim - rk.get(t, 0) - rk.get(t - 1, 0) for t in self.degrees()}

    def euler(self):
        return sum((-1) ** (t % 2) * V.dim for t, V in self.terms.items())

    def is_acyclic(self):
        return all(h == 0 for h in self.homology_dims().values())
