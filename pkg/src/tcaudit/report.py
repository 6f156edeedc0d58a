"""Report envelopes and deterministic serialization.

All numeric payload values are rendered at 17 significant digits, which
round-trips float64 exactly, so the JSON and CSV forms of one run carry
bit-identical numbers and reruns with the same config are byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field


def fmt17(x) -> str:
    """17-significant-digit decimal form; round-trip exact for float64."""
    return format(float(x), ".17g")


def _json_scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return fmt17(v)
    if isinstance(v, str):
        return json.dumps(v, ensure_ascii=False)
    raise TypeError(f"unsupported JSON scalar {type(v)!r}")


def dumps_json(obj, indent: int = 0) -> str:
    """Order-preserving JSON with floats at 17 significant digits."""
    pad = " " * indent
    inner = " " * (indent + 2)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{inner}{json.dumps(str(k), ensure_ascii=False)}: {dumps_json(v, indent + 2)}'
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{inner}{dumps_json(v, indent + 2)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return _json_scalar(obj)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt17(v)
    return str(v)


def to_csv(columns: list[str], records: list[dict]) -> str:
    """Header plus one row per record; UTF-8 text with LF line endings."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for rec in records:
        writer.writerow([_cell(rec.get(col)) for col in columns])
    return buf.getvalue()


def to_table(columns: list[str], records: list[dict]) -> str:
    """Aligned plain-text table for terminals."""
    rows = [[_cell(rec.get(col)) for col in columns] for rec in records]
    widths = [
        max(len(col), *(len(r[i]) for r in rows)) if rows else len(col)
        for i, col in enumerate(columns)
    ]
    def line(cells):
        return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    out = [line(columns), line(["-" * w for w in widths])]
    out.extend(line(r) for r in rows)
    return "\n".join(out) + "\n"


@dataclass
class ReportEnvelope:
    """One run's machine-readable report.

    results is a list of flat records (dicts with a fixed column order per
    command); the CSV rendering is exactly those records, so both formats
    carry the same numbers.
    """

    tool_version: str
    config: dict
    assumptions: list[str]
    columns: list[str]
    results: list[dict] = field(default_factory=list)

    def to_json(self) -> str:
        payload = {
            "tool_version": self.tool_version,
            "config": self.config,
            "assumptions": list(self.assumptions),
            "results": [
                {col: rec.get(col) for col in self.columns} for rec in self.results
            ],
        }
        return dumps_json(payload) + "\n"

    def to_csv(self) -> str:
        return to_csv(self.columns, self.results)

    def to_table(self) -> str:
        return to_table(self.columns, self.results)

    def render(self, output_format: str) -> str:
        if output_format == "json":
            return self.to_json()
        if output_format == "csv":
            return self.to_csv()
        if output_format == "table":
            return self.to_table()
        raise ValueError(f"unknown output format {output_format!r}")
