"""Deterministic multi-panel rendering of simulator series files.

Values are plotted verbatim from the parsed CSV; nothing is recomputed.
Re-rendering the same spec produces a byte-identical image (fixed layout,
no timestamps in the PNG metadata).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .schema import SchemaError, SeriesFile, load_series  # noqa: E402

LAYOUTS = {"panels-2x2": 4, "dual": 2, "single": 1}

AXIS_LABELS = {
    "t": "time (rescaled)",
    "t_caption": "time",
    "G": "G (rad/s)",
    "G_caption": "G",
}
VALUE_LABELS = {"population": "excited-state population", "entropy": "entropy"}

# Metadata keys echoed under each panel, in this order.
CAPTION_KEYS = ("scenario", "alpha", "G", "beta", "omega0")


@dataclass
class PlotSpec:
    inputs: list[Path]
    layout: str
    output: Path
    dpi: int = 120
    title: str | None = None

    @classmethod
    def from_json(cls, path: str | Path) -> "PlotSpec":
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ValueError(f"cannot load plot spec {path}: {exc}") from exc
        for key in ("inputs", "layout", "output"):
            if key not in raw:
                raise ValueError(f"plot spec {path}: missing key '{key}'")
        unknown = set(raw) - {"inputs", "layout", "output", "dpi", "title"}
        if unknown:
            raise ValueError(f"plot spec {path}: unknown keys {sorted(unknown)}")
        if raw["layout"] not in LAYOUTS:
            raise ValueError(
                f"plot spec {path}: layout must be one of {sorted(LAYOUTS)}, got {raw['layout']!r}"
            )
        inputs = [Path(p) for p in raw["inputs"]]
        if len(inputs) != LAYOUTS[raw["layout"]]:
            raise ValueError(
                f"plot spec {path}: layout {raw['layout']!r} needs "
                f"{LAYOUTS[raw['layout']]} inputs, got {len(inputs)}"
            )
        return cls(
            inputs=inputs,
            layout=raw["layout"],
            output=Path(raw["output"]),
            dpi=int(raw.get("dpi", 120)),
            title=raw.get("title"),
        )


def _unit_suffix(doc: SeriesFile, axis: str) -> str:
    unit_key = {"t_caption": "t_caption_unit", "G_caption": "G_caption_unit"}.get(axis)
    if unit_key and unit_key in doc.metadata:
        return f" ({doc.metadata[unit_key]})"
    return ""


def _caption(doc: SeriesFile) -> str:
    parts = [f"{k} = {doc.metadata[k]}" for k in CAPTION_KEYS if k in doc.metadata]
    return ", ".join(parts)


def _draw_panel(ax, doc: SeriesFile, letter: str) -> None:
    axis = doc.axis_column
    value = doc.value_column
    ax.plot(doc.column(axis), doc.column(value), lw=0.9, color="#1f4e8c")
    ax.set_xlabel(AXIS_LABELS.get(axis, axis) + _unit_suffix(doc, axis), fontsize=8)
    ax.set_ylabel(VALUE_LABELS.get(value, value), fontsize=8)
    ax.tick_params(labelsize=7)
    ax.set_title(f"({letter})  {_caption(doc)}", fontsize=7, loc="left")


def render(spec: PlotSpec) -> Path:
    docs = [load_series(p) for p in spec.inputs]
    n = LAYOUTS[spec.layout]
    if spec.layout == "panels-2x2":
        fig, axes = plt.subplots(2, 2, figsize=(8.0, 6.0))
        flat = axes.ravel()
    elif spec.layout == "dual":
        fig, axes = plt.subplots(2, 1, figsize=(6.0, 6.0))
        flat = axes.ravel()
    else:
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        flat = [ax]
    for i in range(n):
        _draw_panel(flat[i], docs[i], "abcd"[i])
    if spec.title:
        fig.suptitle(spec.title, fontsize=10)
    fig.tight_layout()
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.output, format="png", dpi=spec.dpi, metadata={"Software": None})
    plt.close(fig)
    return spec.output


__all__ = ["PlotSpec", "render", "SchemaError"]
