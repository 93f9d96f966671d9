"""
``ngr``: build and certify noncommutative Grassmannian data from the shell.

Exit status: 0 when every certificate in the report passes, 2 when some
certificate fails, 1 on configuration or structural errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

from .config import algebra_from_config, load_json, subspace_from_config
from .exactla import FieldSpec, StructuralError
from .report import emit_report, make_report
from .zalg import BudgetExceeded, Certificate

DEFAULT_WINDOW_CAP = 20
COMMANDS = ("build", "koszul-check", "dual", "helix", "compare", "point", "ext", "local-ring", "suite")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError("%s\n%s" % (self.format_usage().rstrip(), message))


# ---------------------------------------------------------------------------
# argument handling


def parse_window(text: str) -> Tuple[int, int]:
    try:
        lo, hi = text.split("..")
        return int(lo), int(hi)
    except ValueError:
        raise UsageError("window must look like LO..HI, got %r" % text) from None


def _join_window(argv: Sequence[str]) -> List[str]:
    """Let ``--window -4..4`` through argparse, which would read -4..4 as a flag."""
    out = []
    it = iter(argv)
    for a in it:
        if a == "--window":
            nxt = next(it, None)
            out.append("--window=%s" % nxt if nxt is not None else a)
        else:
            out.append(a)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ngr", description=__doc__.strip().splitlines()[0], allow_abbrev=False)
    sub = p.add_subparsers(dest="command")
    for name in COMMANDS:
        s = sub.add_parser(name, allow_abbrev=False)
        s.add_argument("--m", type=int)
        s.add_argument("--n", type=int)
        s.add_argument("--config", help="custom quadratic Z-algebra (JSON)")
        s.add_argument("--window", help="index window LO..HI")
        s.add_argument("--window-cap", type=int, default=DEFAULT_WINDOW_CAP)
        s.add_argument("--field", default="rationals", help="rationals or prime:P")
        s.add_argument("--subspace", help="JSON file with rows spanning W")
        s.add_argument("--extend", type=int, help="helix steps to the right")
        s.add_argument("--extend-left", type=int, default=0, help="helix steps to the left")
        s.add_argument("--ph", type=int, help="Frobenius period for custom algebras")
        s.add_argument("--explicit", action="store_true", help="compute every Koszul rank directly")
        s.add_argument("--output", help="write the report here instead of stdout")
        s.add_argument("--format", choices=("json", "text"), default="json")
        s.add_argument("--jobs", type=int, help="worker processes (default: $NGR_JOBS or 1)")
        s.add_argument("--timing", action="store_true", help="record seconds per certificate")
    return p


def _source(args) -> Dict:
    field = FieldSpec.parse(args.field)
    if args.config:
        if args.m is not None or args.n is not None:
            raise UsageError("give either --config or --m/--n, not both")
        return {"config": load_json(args.config), "field": str(field)}
    if args.m is None or args.n is None:
        raise UsageError("--m and --n are required (or --config)")
    if not 1 <= args.m <= args.n - 1:
        raise StructuralError("need 1 <= m <= n-1, got m=%d n=%d" % (args.m, args.n))
    return {"m": args.m, "n": args.n, "field": str(field)}


def _spec(src):
    from .ngrass import NgrSpec
    if "m" not in src:
        raise UsageError("this command needs --m and --n")
    return NgrSpec(src["m"], src["n"], FieldSpec.parse(src["field"]))


def _algebra(src):
    if "config" in src:
        return algebra_from_config(src["config"], FieldSpec.parse(src["field"]))
    from .ngrass import build_ngr
    return build_ngr(_spec(src))


def _check_window(w, cap):
    lo, hi = w
    if lo > hi:
        raise UsageError("window %d..%d is empty" % w)
    if hi - lo > cap:
        raise UsageError("window %d..%d is wider than the cap %d" % (lo, hi, cap))
    return w


def _check_prime(src, window):
    """Prime fields must satisfy p > 2 (window width + dim V)."""
    f = FieldSpec.parse(src["field"])
    if f.p is None:
        return
    if "m" in src:
        size = src["n"]
    else:
        gens = src["config"].get("generators", [])
        size = max([g.get("dim", 0) if isinstance(g, dict) else g for g in gens] or [0])
    bound = 2 * (window[1] - window[0] + size)
    if f.p <= bound:
        raise StructuralError("prime %d is too small for this window; need p > %d" % (f.p, bound))


# ---------------------------------------------------------------------------
# tasks (top-level so a process pool can run them)


def task_build(src, window):
    from .zalg import hilbert_table
    A = _algebra(src)
    return [], {"hilbert": hilbert_table(A, window)}


def task_koszul(src, window, explicit=False):
    from .zalg import koszulity_check
    A = _algebra(src)
    return [koszulity_check(A, window, explicit)], {}


def task_frobenius(src, window, ph=None):
    from .zalg import frobenius_check
    A = _algebra(src)
    if ph is None:
        if "m" not in src:
            raise UsageError("custom algebras need --ph for the Frobenius check")
        ph = src["n"] - src["m"] + 1
    return [frobenius_check(A, ph, window)], {}


def task_dual(src, window):
    from .zalg import hilbert_table
    A = _algebra(src)
    D = A.dual()
    lo, hi = window
    rows = [[D.piece_dim(i, j) if j <= i else 0 for j in range(lo, hi + 1)] for i in range(lo, hi + 1)]
    return [], {"dual_hilbert": rows}


def task_compare(src):
    from .ngrass import build_b_algebra, build_ngr, compare_with_geometry
    spec = _spec(src)
    return [compare_with_geometry(build_ngr(spec), build_b_algebra(spec), spec)], {}


def task_helix(src, right, left):
    from .helix import extend_helix, helix_end_algebra, hom_table, verify_geometric
    from .ngrass import build_b_algebra, build_ngr
    spec = _spec(src)
    B = build_b_algebra(spec)
    hw = extend_helix(B, right, left)
    idx = hw.indices()
    certs = [verify_geometric(hw)]
    if certs[0].passed:
        # generator identification starts on the base projectives
        lo = max(idx[0], B.objects[0])
        certs.append(helix_end_algebra(hw, build_ngr(spec), (lo, idx[-1])))
    objects = {}
    for i in idx:
        X = hw.objects[i]
        objects[str(i)] = {str(t): {str(o): k for o, k in sorted(mult.items())}
                           for t, mult in sorted(X.multiplicities().items())}
    return certs, {"indices": idx, "objects": objects, "hom0": hom_table(hw)}


def _subspace(spec, doc):
    from .config import parse_scalar
    from .points import SubspaceW
    rows = [[parse_scalar(x, spec.field) for x in r] for r in doc["rows"]]
    comp = doc.get("complement")
    if comp is not None:
        comp = [[parse_scalar(x, spec.field) for x in r] for r in comp]
    return SubspaceW(spec, rows, comp)


def task_point(src, wdoc, window):
    from .points import Rejection, point_functor
    spec = _spec(src)
    W = _subspace(spec, wdoc)
    res = point_functor(spec, W, window)
    if isinstance(res, Rejection):
        wit = dict(res.witness)
        wit["reason"] = res.reason
        return [Certificate("point_functor", window, False, wit)], {"dim_W": W.d}
    cert = Certificate("point_functor", window, True, {}, {"dim_W": W.d})
    return [cert] + res.certificates, {"dim_W": W.d,
                                       "point_dims": {str(k): v for k, v in sorted(res.dims.items())}}


def task_ext(src, wdoc):
    from .points import ext_algebra
    spec = _spec(src)
    W = _subspace(spec, wdoc)
    table, certs = ext_algebra(spec, W)
    return certs, {"ext_dims": table.dims, "ext_expected": table.expected,
                   "product_signs": table.products}


def task_local_ring(src, wdoc):
    from .points import local_ring, tangent_dimension
    spec = _spec(src)
    W = _subspace(spec, wdoc)
    lr, certs = local_ring(spec, W)
    g = lr.generators
    n1 = len(g)

    def mono(v):
        return {"%s*%s" % (g[k // n1], g[k % n1]): c for k, c in sorted(v.items())}

    tables = {"generators": g, "tangent_dimension": tangent_dimension(spec, W),
              "relations": [mono(r) for r in lr.relations.rows],
              "rel1": [mono(r) for r in lr.rel1], "rel2": [mono(r) for r in lr.rel2],
              "local_ring_hilbert": lr.hilbert}
    return certs, tables


def _default_w(spec, d):
    return {"rows": [[1 if j == i else 0 for j in range(spec.n)] for i in range(d)]}


def plan(args) -> Tuple[str, Dict, List[Tuple[str, tuple]]]:
    """Config echo and a list of (task name, args) for the subcommand."""
    cmd = args.command
    src = _source(args)
    cap = args.window_cap
    echo = {k: v for k, v in src.items() if k != "config"}
    if "config" in src:
        echo["config"] = src["config"].get("name", "custom")
    if "m" in src:
        p = src["n"] - src["m"] + 1
        default = (-2 * p, 2 * p)
    else:
        default = (-4, 4)
    window = _check_window(parse_window(args.window) if args.window else default, cap)
    _check_prime(src, window)
    tasks: List[Tuple[str, tuple]] = []
    wdoc = subspace_from_config(load_json(args.subspace)) if args.subspace else None
    if cmd in ("point", "ext", "local-ring") and wdoc is None:
        raise UsageError("%s needs --subspace FILE" % cmd)
    if cmd == "build":
        tasks.append(("build", (src, window)))
        tasks.append(("koszul", (src, window, args.explicit)))
        if "m" in src or args.ph:
            tasks.append(("frobenius", (src, window, args.ph)))
    elif cmd == "koszul-check":
        tasks.append(("koszul", (src, window, args.explicit)))
    elif cmd == "dual":
        tasks.append(("dual", (src, window)))
        if "m" in src or args.ph:
            tasks.append(("frobenius", (src, window, args.ph)))
    elif cmd == "compare":
        tasks.append(("compare", (src,)))
    elif cmd == "helix":
        p = src["n"] - src["m"] + 1 if "m" in src else 0
        right = args.extend if args.extend is not None else p
        echo["extend"] = right
        echo["extend_left"] = args.extend_left
        if right < 0 or args.extend_left < 0 or right + args.extend_left > cap:
            raise UsageError("helix extension must be between 0 and the window cap")
        tasks.append(("helix", (src, right, args.extend_left)))
    elif cmd == "point":
        pw = _check_window(parse_window(args.window) if args.window else (-4, 4), cap)
        window = pw
        tasks.append(("point", (src, wdoc, pw)))
    elif cmd == "ext":
        tasks.append(("ext", (src, wdoc)))
    elif cmd == "local-ring":
        tasks.append(("local_ring", (src, wdoc)))
    elif cmd == "suite":
        spec = _spec(src)
        tasks += [("build", (src, window)), ("koszul", (src, window, args.explicit)),
                  ("frobenius", (src, window, None)), ("compare", (src,)),
                  ("helix", (src, spec.p, 0))]
        wm = wdoc or _default_w(spec, spec.m)
        tasks += [("point", (src, wm, (-4, 4))), ("ext", (src, wm)), ("local_ring", (src, wm))]
        if wdoc is None and spec.m > 1:
            w1 = _default_w(spec, 1)
            tasks += [("point", (src, w1, (-4, 4))), ("ext", (src, w1))]
    if cmd not in ("helix", "compare", "ext", "local-ring"):
        echo["window"] = list(window)
    if wdoc is not None:
        echo["subspace"] = [[str(x) for x in r] for r in wdoc["rows"]]
    return cmd, echo, tasks


TASKS = {"build": task_build, "koszul": task_koszul, "frobenius": task_frobenius,
         "dual": task_dual, "compare": task_compare, "helix": task_helix,
         "point": task_point, "ext": task_ext, "local_ring": task_local_ring}


def _run_task(item):
    name, targs = item
    t = time.perf_counter()
    certs, tables = TASKS[name](*targs)
    return certs, tables, time.perf_counter() - t


def execute(tasks, jobs=1):
    items = list(tasks)
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
            results = list(pool.map(_run_task, items))
    else:
        results = [_run_task(it) for it in items]
    certs: List[Certificate] = []
    tables: Dict = {}
    timings: Dict[str, float] = {}
    seen: Dict[str, int] = {}
    for (name, targs), (cs, tb, secs) in zip(items, results):
        k = seen[name] = seen.get(name, 0) + 1
        suffix = "" if k == 1 else "#%d" % k
        for c in cs:
            if suffix:
                c = Certificate(c.name + suffix, c.window, c.passed, c.witness, c.data)
            certs.append(c)
            timings[c.name] = secs
        for key, val in tb.items():
            tables[key + suffix] = val
    return certs, tables, timings


def _jobs(args, env):
    if args.jobs is not None:
        j = args.jobs
    else:
        try:
            j = int(env.get("NGR_JOBS", "1"))
        except ValueError:
            raise UsageError("NGR_JOBS must be an integer") from None
    if j < 1:
        raise UsageError("jobs must be at least 1")
    return j


def parse_and_dispatch(argv: Optional[Sequence[str]] = None, env=None, stdout=None) -> int:
    env = os.environ if env is None else env
    out = stdout or sys.stdout.buffer
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_join_window(argv))
        if args.command is None:
            raise UsageError(build_parser().format_usage().rstrip() + "\nmissing subcommand")
        jobs = _jobs(args, env)
        cmd, echo, tasks = plan(args)
        certs, tables, timings = execute(tasks, jobs)
    except UsageError as e:
        sys.stderr.write("ngr: %s\n" % e)
        return 1
    except (StructuralError, BudgetExceeded) as e:
        sys.stderr.write("ngr: error: %s\n" % e)
        return 1
    doc = make_report(cmd, echo, certs, tables, timings if args.timing else None)
    data = emit_report(doc, args.format)
    if args.output:
        try:
            with open(args.output, "wb") as fh:
                fh.write(data)
        except OSError as e:
            sys.stderr.write("ngr: cannot write %s: %s\n" % (args.output, e))
            return 1
    else:
        out.write(data)
        out.flush()
    return 0 if doc["status"] == "pass" else 2


def main():
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()
