"""JSON and markdown rendering of report dicts."""

from __future__ import annotations

import json

SCHEMA = "perfchar/1"


def with_schema(kind: str, payload: dict) -> dict:
    out = {"schema": SCHEMA, "report": kind}
    out.update(payload)
    return out


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _cell(v) -> str:
    if isinstance(v, (dict, list)):
        return "`" + json.dumps(v, sort_keys=True, ensure_ascii=False) + "`"
    if v is None:
        return ""
    return str(v).replace("|", "\\|")


def _table(rows: list) -> list:
    cols = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    lines = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
    for r in rows:
        lines.append("| " + " | ".join(_cell(r.get(c)) for c in cols) + " |")
    return lines


def to_markdown(report: dict) -> str:
    """Scalars as a key/value table; each list of dicts as its own table."""
    title = report.get("report", "report")
    lines = [f"# perfchar {title}", ""]
    scalars = [(k, v) for k, v in sorted(report.items())
               if not (isinstance(v, list) and v and all(isinstance(x, dict) for x in v))]
    lines += ["| key | value |", "|---|---|"]
    lines += [f"| {k} | {_cell(v)} |" for k, v in scalars]
    for k, v in sorted(report.items()):
        if isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
            lines += ["", f"## {k}", ""] + _table(v)
    return "\n".join(lines) + "\n"


def render(report: dict, fmt: str) -> str:
    return to_markdown(report) if fmt == "md" else to_json(report)
