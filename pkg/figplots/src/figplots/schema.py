"""Parser and validator for the simulator's CSV interface.

Layout contract: header row, then ``#``-prefixed ``key = value`` metadata
lines, then float data rows.  Every valid file carries the rescaling
frequency ``omega0`` in its metadata and at least one plottable series
(``population`` or ``entropy``) against an axis column (``t``, ``t_caption``,
``G`` or ``G_caption``).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

AXIS_COLUMNS = ("t_caption", "t", "G_caption", "G")
VALUE_COLUMNS = ("population", "entropy")


class SchemaError(Exception):
    """Input file violates the CSV interface; names the offending column/key."""

    def __init__(self, path, column: str, message: str):
        super().__init__(f"{path}: column '{column}': {message}")
        self.column = column


@dataclass
class SeriesFile:
    path: Path
    columns: list[str]
    rows: np.ndarray
    metadata: dict[str, str]

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]

    @property
    def axis_column(self) -> str:
        for name in AXIS_COLUMNS:
            if name in self.columns:
                return name
        raise SchemaError(self.path, "/".join(AXIS_COLUMNS), "no axis column present")

    @property
    def value_column(self) -> str:
        for name in VALUE_COLUMNS:
            if name in self.columns:
                return name
        raise SchemaError(self.path, "/".join(VALUE_COLUMNS), "no plottable column present")


def load_series(path: str | Path) -> SeriesFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(path, "<file>", f"cannot read: {exc}") from exc
    lines = text.splitlines()
    if not lines or not lines[0]:
        raise SchemaError(path, "<header>", "empty document")
    columns = lines[0].split(",")
    metadata: dict[str, str] = {}
    data: list[list[float]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].strip().partition(" = ")
            if not sep:
                raise SchemaError(path, "<metadata>", f"malformed metadata at line {lineno}")
            metadata[key] = value
            continue
        cells = line.split(",")
        if len(cells) != len(columns):
            raise SchemaError(
                path, columns[-1], f"row at line {lineno} has {len(cells)} fields, "
                f"header declares {len(columns)}"
            )
        try:
            data.append([float(c) for c in cells])
        except ValueError as exc:
            raise SchemaError(path, "<data>", f"non-numeric cell at line {lineno}") from exc
    doc = SeriesFile(path, columns, np.array(data, dtype=float).reshape(len(data), len(columns)), metadata)
    validate(doc)
    return doc


def validate(doc: SeriesFile) -> None:
    if "omega0" not in doc.metadata:
        raise SchemaError(doc.path, "omega0", "metadata scale missing")
    _ = doc.axis_column
    _ = doc.value_column
    if len(doc.rows) == 0:
        raise SchemaError(doc.path, doc.columns[0], "no data rows")
