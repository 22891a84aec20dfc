"""Deterministic CSV/JSON emission with exact round-tripping.

CSV layout: header row, then ``#``-prefixed ``key = value`` metadata lines,
then data rows.  Floats are written with 17 significant digits, which
uniquely identifies a double, so parse -> render reproduces a file byte for
byte.  JSON documents use sorted keys and shortest-round-trip floats with
the same guarantee.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "TableDocument",
    "format_float",
    "render_csv",
    "parse_csv",
    "render_json",
    "parse_json",
    "write_document",
    "read_document",
]


def format_float(x: float) -> str:
    return format(float(x), ".16e")


def format_meta_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, (list, tuple)):
        return json.dumps(list(value))
    return str(value)


@dataclass
class TableDocument:
    """Column-oriented table with string metadata, ready for emission."""

    columns: list[str]
    rows: np.ndarray
    metadata: dict[str, str]

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=float)
        if self.rows.ndim != 2 or self.rows.shape[1] != len(self.columns):
            raise ValueError(
                f"row shape {self.rows.shape} inconsistent with {len(self.columns)} columns"
            )

    @classmethod
    def build(cls, series: dict[str, np.ndarray], metadata: dict) -> "TableDocument":
        columns = list(series)
        rows = np.column_stack([np.asarray(series[c], dtype=float) for c in columns])
        meta = {str(k): format_meta_value(v) for k, v in metadata.items()}
        return cls(columns, rows, meta)

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]


def render_csv(doc: TableDocument) -> str:
    lines = [",".join(doc.columns)]
    for key, value in doc.metadata.items():
        lines.append(f"# {key} = {value}")
    for row in doc.rows:
        lines.append(",".join(format_float(x) for x in row))
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> TableDocument:
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty CSV document")
    columns = lines[0].split(",")
    metadata: dict[str, str] = {}
    data: list[list[float]] = []
    for line in lines[1:]:
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            key, sep, value = body.partition(" = ")
            if not sep:
                raise ValueError(f"malformed metadata line: {line!r}")
            metadata[key] = value
            continue
        values = line.split(",")
        if len(values) != len(columns):
            raise ValueError(
                f"row has {len(values)} fields, header declares {len(columns)}"
            )
        data.append([float(v) for v in values])
    rows = np.array(data, dtype=float).reshape(len(data), len(columns))
    return TableDocument(columns, rows, metadata)


def render_json(doc: TableDocument) -> str:
    payload = {
        "metadata": doc.metadata,
        "columns": doc.columns,
        "data": [list(map(float, row)) for row in doc.rows],
    }
    return json.dumps(payload, sort_keys=True, indent=1) + "\n"


def parse_json(text: str) -> TableDocument:
    payload = json.loads(text)
    rows = np.array(payload["data"], dtype=float).reshape(-1, len(payload["columns"]))
    return TableDocument(list(payload["columns"]), rows, dict(payload["metadata"]))


def write_document(path: str | Path, doc: TableDocument, fmt: str) -> None:
    text = render_csv(doc) if fmt == "csv" else render_json(doc)
    Path(path).write_text(text, encoding="utf-8", newline="")


def read_document(path: str | Path) -> TableDocument:
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        return parse_json(text)
    return parse_csv(text)
