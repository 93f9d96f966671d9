"""Report documents: deterministic JSON and plain-text rendering."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, Iterable, List, Optional

from . import __version__
from .zalg import Certificate

SCHEMA_VERSION = "ncgrass-report/1"


def _canon(x):
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)
    if isinstance(x, dict):
        return {str(k): _canon(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_canon(v) for v in x]
    if isinstance(x, Certificate):
        return _canon(x.as_dict())
    return x


def make_report(command: str, config: Dict, certificates: Iterable[Certificate],
                tables: Optional[Dict] = None, timings: Optional[Dict[str, float]] = None) -> Dict:
    certs: List[Dict] = []
    for c in certificates:
        d = c.as_dict()
        if timings is not None and c.name in timings:
            d["seconds"] = round(timings[c.name], 3)
        certs.append(d)
    status = "pass" if all(c["verdict"] == "pass" for c in certs) else "fail"
    return _canon({
        "schema": SCHEMA_VERSION,
        "tool": {"name": "ncgrass", "version": __version__},
        "command": command,
        "config": config,
        "status": status,
        "certificates": certs,
        "tables": tables or {},
    })


def emit_report(doc: Dict, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(_canon(doc), sort_keys=True, indent=2, ensure_ascii=True) + "\n").encode()
    if fmt == "text":
        return render_text(doc).encode()
    raise ValueError("unknown format %r" % fmt)


def render_text(doc: Dict) -> str:
    out = ["%s %s: %s" % (doc["tool"]["name"], doc["command"], doc["status"].upper())]
    cfg = doc.get("config", {})
    if cfg:
        out.append("config: " + ", ".join("%s=%s" % (k, cfg[k]) for k in sorted(cfg)))
    for c in doc["certificates"]:
        line = "  [%s] %-24s window %s" % (c["verdict"], c["name"], c["window"])
        if c["verdict"] != "pass":
            line += "  witness " + json.dumps(c["witness"], sort_keys=True)
        out.append(line)
    for name in sorted(doc.get("tables", {})):
        t = doc["tables"][name]
        out.append("%s:" % name)
        if isinstance(t, list) and t and isinstance(t[0], list):
            width = max(len(str(x)) for row in t for x in row)
            for row in t:
                out.append("  " + " ".join(str(x).rjust(width) for x in row))
        else:
            out.append("  " + json.dumps(t, sort_keys=True))
    return "\n".join(out) + "\n"
