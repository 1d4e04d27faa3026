"""Deterministic JSON reports and their plain-text rendering.

Floats are written with 17 significant digits so that re-parsing returns the
identical double; non-finite values become ``null``.  Keys keep insertion
order, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import json
import math
from typing import Any

SCHEMA_VERSION = 1


def _float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    text = format(x, ".17g")
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def _encode(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _float(obj)
    if hasattr(obj, "item") and not isinstance(obj, (list, tuple, dict, str)):
        return _encode(obj.item(), indent, level)  # numpy scalars
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, complex):
        return _encode({"re": obj.real, "im": obj.imag}, indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + close + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + close + "]"
    if hasattr(obj, "to_json"):
        return _encode(obj.to_json(), indent, level)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    return _encode(obj, indent, 0) + "\n"


def envelope(kind: str, **payload) -> dict:
    return {"schema": SCHEMA_VERSION, "kind": kind, **payload}


# --- rendering ---------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _table(headers: list[str], rows: list[list]) -> list[str]:
    cells = [[_fmt(c) for c in row] for row in rows]
    widths = [max([len(h)] + [len(r[i]) for r in cells]) for i, h in enumerate(headers)]
    line = "  ".join(h.ljust(w) for h, w in zip(headers, widths))
    out = [line, "-" * len(line)]
    out += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in cells]
    return out


def _norm_rows(rows: list[dict]) -> list[str]:
    rows = sorted(rows, key=lambda x: -(x.get("ratio") or 0.0))
    return _table(
        ["g", "z.re", "z.im", "norm", "bound", "ratio", "kappa"],
        [[r["g"] or "e", r["z"]["re"], r["z"]["im"], r["norm"], r["bound"], r["ratio"], r.get("kappa_used")] for r in rows],
    )


def _kappa_rows(rows: list[dict]) -> list[str]:
    return _table(
        ["g", "r", "family", "kappa_grid", "kappa_lemma", "psd_margin", "flag"],
        [
            [r["g"] or "e", r["r"], r["family_size"], r["kappa_min_grid"], r["kappa_lemma"], r["psd_margin"],
             "VIOLATED" if r.get("flagged") else ""]
            for r in rows
        ],
    )


def render(doc: dict) -> str:
    """Human-readable summary of a report produced by the CLI."""
    kind = doc.get("kind", "")
    lines = [f"coxrep report (schema {doc.get('schema', '?')})" + (f": {kind}" if kind else "")]
    if "config" in doc:
        lines.append("config: " + ", ".join(f"{k}={_fmt(v)}" for k, v in doc["config"].items()))
    if kind == "verify":
        lines.append(f"overall: {'PASS' if doc.get('passed') else 'FAIL'}")
        for suite in doc.get("suites", []):
            lines.append("")
            lines.append(f"[{'PASS' if suite['passed'] else 'FAIL'}] {suite['suite']}")
            for c in suite["claims"]:
                lines.append(f"  {'ok ' if c['passed'] else 'BAD'} {c['claim']}  margin={_fmt(c.get('margin'))}"
                             + (f"  witness={c['witness']}" if c.get("witness") else ""))
                det = c.get("details", {})
                if "rows" in det and det["rows"] and "kappa_min_grid" in det["rows"][0]:
                    lines += ["    " + x for x in _kappa_rows(det["rows"])]
    elif kind == "norm-sweep":
        for block in doc.get("sweeps", []):
            lines.append("")
            lines.append(f"r = {_fmt(block['r'])}, kappa = {_fmt(block['kappa'])}")
            lines += _norm_rows(block["rows"])
    elif kind == "kappa-search":
        lines.append("")
        lines += _kappa_rows(doc.get("rows", []))
    elif kind == "fourier-mu":
        for key in ("mu", "mu_prime"):
            if key in doc:
                lines.append("")
                lines.append(key + ":")
                lines += [f"  {k} = {_fmt(v)}" for k, v in doc[key].items()]
    elif kind == "multiplier":
        lines.append("")
        lines += _table(["N", "r", "sup_dev"], [[e["N"], e["r"], e["sup_dev"]] for e in doc.get("entries", [])])
    elif kind == "kernel-sweep":
        lines.append("")
        for c in doc.get("claims", []):
            lines.append(f"{'ok ' if c['passed'] else 'BAD'} {c['claim']}  margin={_fmt(c.get('margin'))}")
    elif kind in ("enumerate", "nset"):
        rows = doc.get("elements") or doc.get("records") or []
        lines.append(f"{len(rows)} elements")
    return "\n".join(lines) + "\n"
