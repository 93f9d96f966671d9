"""
Structured JSON inputs: custom quadratic Z-algebras and subspaces W of V.

Custom algebra::

    {
      "name": "A(2,4)",
      "field": "rationals",
      "orientation": "positive",
      "period": 3,
      "generators": [{"dim": 6, "labels": [...]}, {"dim": 4}, {"dim": 4}],
      "relations": [[row, row, ...], ...]
    }

``relations[r]`` spans the relation slot inside gen(r+1) (x) gen(r); each row
is a full coordinate list of length dim gen(r+1) * dim gen(r), index
``y * dim gen(r) + x``.  Entries are integers or strings "p/q".  Without
"period", a "window": [lo, hi] is required and generators/relations are
listed for the indices lo..hi-1 and lo..hi-2.

Subspace::

    {"rows": [["1", "0", "0", "0"], ...], "complement": [...]}   # complement optional
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict

from .exactla import BasedSpace, FieldSpec, StructuralError, Subspace
from .zalg import QuadraticZAlgebra, make_quadratic


def parse_scalar(x, field: FieldSpec):
    if isinstance(x, bool):
        raise StructuralError("boolean is not a scalar: %r" % x)
    if isinstance(x, int):
        return field.coerce(x)
    if isinstance(x, str):
        try:
            return field.coerce(Fraction(x.strip()))
        except (ValueError, ZeroDivisionError) as e:
            raise StructuralError("bad scalar %r" % x) from e
    raise StructuralError("scalars must be integers or 'p/q' strings, got %r" % (x,))


def load_json(path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise StructuralError("cannot read %s: %s" % (path, e)) from e
    except json.JSONDecodeError as e:
        raise StructuralError("%s is not valid JSON: %s" % (path, e)) from e


def algebra_from_config(doc: Dict, field: FieldSpec = None) -> QuadraticZAlgebra:
    if not isinstance(doc, dict):
        raise StructuralError("algebra config must be a JSON object")
    if field is None:
        field = FieldSpec.parse(doc.get("field", "rationals"))
    gens_doc = doc.get("generators")
    rels_doc = doc.get("relations")
    if not isinstance(gens_doc, list) or not isinstance(rels_doc, list):
        raise StructuralError("config needs 'generators' and 'relations' lists")
    gens = []
    for r, g in enumerate(gens_doc):
        d = g.get("dim") if isinstance(g, dict) else g
        if not isinstance(d, int) or d < 0:
            raise StructuralError("generator %d: bad dim %r" % (r, d))
        labels = g.get("labels") if isinstance(g, dict) else None
        if labels is not None and len(labels) != d:
            raise StructuralError("generator %d: %d labels for dim %d" % (r, len(labels), d))
        gens.append(BasedSpace(labels or ["g%d_%d" % (r, k) for k in range(d)], field, "gen%d" % r))
    period = doc.get("period")
    window = doc.get("window")
    if period is not None:
        if len(gens) != period or len(rels_doc) != period:
            raise StructuralError("periodic config needs %s generators and relation slots" % period)
        slots = [(gens[(r + 1) % period], gens[r]) for r in range(period)]
    else:
        if not (isinstance(window, list) and len(window) == 2):
            raise StructuralError("non-periodic config needs 'window': [lo, hi]")
        lo, hi = window
        if len(gens) != hi - lo or len(rels_doc) != max(0, hi - lo - 1):
            raise StructuralError("window config needs hi-lo generators and hi-lo-1 relation slots")
        slots = [(gens[r + 1], gens[r]) for r in range(len(rels_doc))]
    rels = []
    for r, (rows, (left, right)) in enumerate(zip(rels_doc, slots)):
        amb = left.tensor(right)
        vecs = []
        for row in rows:
            if len(row) != amb.dim:
                raise StructuralError("relation slot %d: row of length %d, expected %d"
                                      % (r, len(row), amb.dim))
            v = {}
            for k, x in enumerate(row):
                c = parse_scalar(x, field)
                if c:
                    v[k] = c
            vecs.append(v)
        rels.append(Subspace(amb, vecs))
    orient = doc.get("orientation", "positive")
    if orient != "positive":
        raise StructuralError("custom algebras are read with positive orientation")
    if period is not None:
        return make_quadratic(gens, rels, "positive", period=period, name=doc.get("name", "custom"))
    lo, hi = window
    return make_quadratic({lo + r: g for r, g in enumerate(gens)},
                          {lo + r: s for r, s in enumerate(rels)}, "positive",
                          window=(lo, hi), name=doc.get("name", "custom"))


def algebra_to_config(A: QuadraticZAlgebra) -> Dict:
    """Inverse of :func:`algebra_from_config` for periodic algebras."""
    if A.period is None:
        raise StructuralError("only periodic algebras are exported")
    f = A.field
    gens, rels = [], []
    for r in range(A.period):
        g = A.gen(r)
        gens.append({"dim": g.dim, "labels": [str(l) for l in g.labels]})
        amb = A.rel(r).ambient
        rels.append([[f.render(v.get(k, 0)) for k in range(amb.dim)] for v in A.rel(r).rows])
    return {"name": A.name, "field": str(f), "orientation": "positive", "period": A.period,
            "generators": gens, "relations": rels}


def subspace_from_config(doc) -> Dict:
    if isinstance(doc, list):
        doc = {"rows": doc}
    if not isinstance(doc, dict) or not isinstance(doc.get("rows"), list):
        raise StructuralError("subspace file needs a 'rows' list")
    return doc
