"""Scenario configuration: JSON schema, figure-caption defaults, validation.

Every physical default equals the corresponding figure-caption value: the
node-regime (population) scenarios default to the coherent-state figure's
parameter set, the motion-entanglement scenarios to the entanglement
figure's set.  The potential scan defaults to a large-detuning variant that
sits inside the declared validity region of the approximated branch
potential (the default entanglement parameters are deeply off that
region).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .dynamics import DEFAULT_BOUNDARY_BAND, TimeGrid
from .errors import ConfigError
from .params import PhysicalParams
from .states import (
    DEFAULT_TRUNCATION_TOLERANCE,
    coherent_tail_deficit,
    default_coherent_truncation,
)

__all__ = ["SCENARIOS", "ScenarioConfig", "load_config", "default_config_dict"]

TWO_PI = 2.0 * math.pi

SCENARIOS = (
    "population",
    "population-decay",
    "dressed-table",
    "kerr-spectrum",
    "entanglement-time",
    "entanglement-gsweep",
    "entanglement-thermal",
    "adiabatic-check",
    "potential-scan",
)

# Coherent-state population figure: m = 1e-9 kg, L = 5e-3 m,
# omega_m = (2pi) 2.5e3, g = omega = Omega = (2pi) 4.5e6, omega0 = 1e12.
_NODE_PARAMS = {
    "omega": TWO_PI * 4.5e6,
    "Omega": TWO_PI * 4.5e6,
    "g": TWO_PI * 4.5e6,
    "omega_m": TWO_PI * 2.5e3,
    "m": 1e-9,
    "M": 1e-26,
    "L": 5e-3,
    "omega0": 1e12,
}

# Motion-entanglement figure: omega = (2pi) 6e7 MHz, M = 1e-26 kg,
# delta = 1e3, omega_m = (2pi) 8e7, m = 5e-9 kg, L = 1e-4 m; the coupling g
# is not quoted there and keeps the node-figure value.
_MOTION_PARAMS = {
    "omega": TWO_PI * 6e13,
    "Omega": TWO_PI * 6e13 - 1e3,
    "g": TWO_PI * 4.5e6,
    "omega_m": TWO_PI * 8e7,
    "m": 5e-9,
    "M": 1e-26,
    "L": 1e-4,
    "omega0": 1e12,
}

# Large-detuning variant (delta = 3g) whose default scan grid lies inside
# the declared validity region of the approximated branch potential.
_POTENTIAL_PARAMS = {
    **_NODE_PARAMS,
    "g": TWO_PI * 4.5e6 / 20.0,
    "Omega": TWO_PI * 4.5e6 * (1.0 - 3.0 / 20.0),
}

_DECAY_OVERRIDES = {"Gamma": 10.0 * TWO_PI * 4.5e6, "kappa": 2.0 * TWO_PI * 4.5e6}

_DEFAULT_BO_POINTS = (
    {"n": 0, "kQ": 0.2, "xiq_over_omega": 1e-9},
    {"n": 0, "kQ": 0.5, "xiq_over_omega": 5e-9},
    {"n": 1, "kQ": 1.0, "xiq_over_omega": 1e-8},
)

_DEFAULT_NM_PAIRS = ((0, 1), (1, 2), (0, 2))


def _base_params(scenario: str) -> dict:
    if scenario in ("population", "population-decay", "dressed-table", "kerr-spectrum",
                    "adiabatic-check"):
        base = dict(_NODE_PARAMS)
        if scenario == "population-decay":
            base.update(_DECAY_OVERRIDES)
        return base
    if scenario == "potential-scan":
        return dict(_POTENTIAL_PARAMS)
    return dict(_MOTION_PARAMS)


@dataclass
class ScenarioConfig:
    scenario: str
    params: PhysicalParams
    alphas: list[complex] = field(default_factory=lambda: [0.0, 1.0, 3.0, 5.0])
    photon_truncation: int | None = None
    truncation_tolerance: float = DEFAULT_TRUNCATION_TOLERANCE
    n_m: int = 0
    frame: str = "excitation"
    grid: TimeGrid | None = None  # rescaled units, resolved
    G: float = 5e3
    G_list: list[float] = field(default_factory=list)
    t_fixed: float = 1e-4  # seconds (0.1 ms)
    beta: float = 1e14
    d_c: int = 8
    d_b: int = 8
    rwa: bool = False
    rwa_resonance: bool = False
    omega_choice: str = "omega"
    swap_thermal_slot: bool = False
    thermal_sweep: str = "time"
    dressed_n_max: int = 15
    nm_pairs: list[tuple[int, int]] = field(default_factory=lambda: [list(p) for p in _DEFAULT_NM_PAIRS])
    bo_points: list[dict] = field(default_factory=lambda: [dict(p) for p in _DEFAULT_BO_POINTS])
    fd_step: float = 1e-6
    adiabatic_alpha: complex = 1.0
    scan_n: int = 0
    scan_points: int = 50
    scan_kQ_max: float = 0.03
    scan_xiq_over_delta_max: float = 1e-3
    boundary_band: int = DEFAULT_BOUNDARY_BAND
    output_path: str | None = None
    output_format: str = "csv"


_GRID_KEYS = {"t_start", "t_end", "n_steps", "units"}

_KNOWN_KEYS = {
    "scenario", "params", "alphas", "photon_truncation", "truncation_tolerance",
    "n_m", "frame", "grid", "G", "G_list", "t_fixed", "beta", "truncations",
    "rwa", "rwa_resonance", "omega_choice", "swap_thermal_slot", "thermal_sweep",
    "dressed_n_max", "nm_pairs", "bo_points", "fd_step", "adiabatic_alpha",
    "potential", "boundary_band", "output",
}

_PARAM_KEYS = {"omega", "Omega", "g", "omega_m", "m", "M", "L", "c_light",
               "Gamma", "kappa", "omega0"}


def _require_number(raw, field_name: str, minimum=None, strict_min=False) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ConfigError(field_name, f"expected a number, got {raw!r}")
    value = float(raw)
    if minimum is not None:
        if strict_min and not value > minimum:
            raise ConfigError(field_name, f"must be > {minimum}, got {value!r}")
        if not strict_min and not value >= minimum:
            raise ConfigError(field_name, f"must be >= {minimum}, got {value!r}")
    return value


def _require_int(raw, field_name: str, minimum=None) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ConfigError(field_name, f"expected an integer, got {raw!r}")
    if minimum is not None and raw < minimum:
        raise ConfigError(field_name, f"must be >= {minimum}, got {raw}")
    return raw


def _parse_alpha(raw, field_name: str) -> complex:
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return complex(raw)
    if isinstance(raw, list) and len(raw) == 2:
        return complex(
            _require_number(raw[0], field_name), _require_number(raw[1], field_name)
        )
    raise ConfigError(field_name, f"expected a number or [re, im] pair, got {raw!r}")


def _parse_grid(raw: dict, omega0: float, scenario: str) -> TimeGrid:
    unknown = set(raw) - _GRID_KEYS
    if unknown:
        raise ConfigError("grid", f"unknown keys {sorted(unknown)}")
    units = raw.get("units", "rescaled")
    if units not in ("rescaled", "seconds"):
        raise ConfigError("grid.units", f"must be 'rescaled' or 'seconds', got {units!r}")
    scale = omega0 if units == "seconds" else 1.0
    t_start = _require_number(raw.get("t_start", 0.0), "grid.t_start") * scale
    if "t_end" not in raw:
        raise ConfigError("grid.t_end", "required when a grid is given")
    t_end = _require_number(raw["t_end"], "grid.t_end") * scale
    n_steps = _require_int(raw.get("n_steps", 600), "grid.n_steps", minimum=2)
    if not t_end > t_start:
        raise ConfigError("grid.t_end", f"must exceed t_start, got {raw['t_end']!r}")
    return TimeGrid(t_start, t_end, n_steps)


def _build_params(scenario: str, overrides: dict) -> PhysicalParams:
    unknown = set(overrides) - _PARAM_KEYS
    if unknown:
        raise ConfigError("params", f"unknown parameter keys {sorted(unknown)}")
    merged = _base_params(scenario)
    for key, raw in overrides.items():
        minimum = 0.0
        strict = key not in ("Gamma", "kappa")
        merged[key] = _require_number(raw, f"params.{key}", minimum, strict_min=strict)
    try:
        return PhysicalParams(**merged)
    except ValueError as exc:
        raise ConfigError("params", str(exc)) from exc


def parse_config_dict(raw: dict) -> ScenarioConfig:
    if "scenario" not in raw:
        raise ConfigError("scenario", "required")
    scenario = raw["scenario"]
    if scenario not in SCENARIOS:
        raise ConfigError(
            "scenario", f"unknown scenario {scenario!r}; expected one of {list(SCENARIOS)}"
        )
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ConfigError("config", f"unknown keys {sorted(unknown)}")

    params = _build_params(scenario, dict(raw.get("params", {})))
    cfg = ScenarioConfig(scenario=scenario, params=params)

    if scenario not in ("population", "population-decay"):
        cfg.frame = "lab"
    if "frame" in raw:
        if raw["frame"] not in ("lab", "excitation"):
            raise ConfigError("frame", f"must be 'lab' or 'excitation', got {raw['frame']!r}")
        cfg.frame = raw["frame"]

    if "alphas" in raw:
        if not isinstance(raw["alphas"], list) or not raw["alphas"]:
            raise ConfigError("alphas", "expected a non-empty list")
        cfg.alphas = [_parse_alpha(a, "alphas") for a in raw["alphas"]]
    if "photon_truncation" in raw and raw["photon_truncation"] is not None:
        cfg.photon_truncation = _require_int(raw["photon_truncation"], "photon_truncation", 2)
    if "truncation_tolerance" in raw:
        cfg.truncation_tolerance = _require_number(
            raw["truncation_tolerance"], "truncation_tolerance", 0.0, strict_min=True
        )
    if "n_m" in raw:
        cfg.n_m = _require_int(raw["n_m"], "n_m", 0)
    if "grid" in raw:
        if not isinstance(raw["grid"], dict):
            raise ConfigError("grid", "expected an object")
        cfg.grid = _parse_grid(raw["grid"], params.omega0, scenario)
    if "G" in raw:
        cfg.G = _require_number(raw["G"], "G", 0.0)
    if "G_list" in raw:
        if not isinstance(raw["G_list"], list) or not raw["G_list"]:
            raise ConfigError("G_list", "expected a non-empty list")
        cfg.G_list = [_require_number(v, "G_list", 0.0) for v in raw["G_list"]]
    if "t_fixed" in raw:
        cfg.t_fixed = _require_number(raw["t_fixed"], "t_fixed", 0.0, strict_min=True)
    if "beta" in raw:
        cfg.beta = _require_number(raw["beta"], "beta", 0.0, strict_min=True)
    if "truncations" in raw:
        tr = raw["truncations"]
        if not isinstance(tr, dict) or set(tr) - {"c", "b"}:
            raise ConfigError("truncations", "expected an object with keys 'c' and/or 'b'")
        if "c" in tr:
            cfg.d_c = _require_int(tr["c"], "truncations.c", 2)
        if "b" in tr:
            cfg.d_b = _require_int(tr["b"], "truncations.b", 2)
    for key in ("rwa", "rwa_resonance", "swap_thermal_slot"):
        if key in raw:
            if not isinstance(raw[key], bool):
                raise ConfigError(key, f"expected a boolean, got {raw[key]!r}")
            setattr(cfg, key, raw[key])
    if "omega_choice" in raw:
        if raw["omega_choice"] not in ("omega", "omega_m"):
            raise ConfigError("omega_choice", f"got {raw['omega_choice']!r}")
        cfg.omega_choice = raw["omega_choice"]
    if "thermal_sweep" in raw:
        if raw["thermal_sweep"] not in ("time", "g"):
            raise ConfigError("thermal_sweep", f"must be 'time' or 'g', got {raw['thermal_sweep']!r}")
        cfg.thermal_sweep = raw["thermal_sweep"]
    if "dressed_n_max" in raw:
        cfg.dressed_n_max = _require_int(raw["dressed_n_max"], "dressed_n_max", 0)
    if "nm_pairs" in raw:
        pairs = raw["nm_pairs"]
        if not isinstance(pairs, list) or not pairs:
            raise ConfigError("nm_pairs", "expected a non-empty list of [n_m, m_m] pairs")
        parsed = []
        for pair in pairs:
            if not isinstance(pair, list) or len(pair) != 2:
                raise ConfigError("nm_pairs", f"expected [n_m, m_m], got {pair!r}")
            n_m = _require_int(pair[0], "nm_pairs", 0)
            m_m = _require_int(pair[1], "nm_pairs", 0)
            if n_m == m_m:
                raise ConfigError("nm_pairs", f"indices must differ, got {pair!r}")
            parsed.append((n_m, m_m))
        cfg.nm_pairs = parsed
    if "bo_points" in raw:
        pts = raw["bo_points"]
        if not isinstance(pts, list) or not pts:
            raise ConfigError("bo_points", "expected a non-empty list")
        parsed_pts = []
        for pt in pts:
            if not isinstance(pt, dict) or set(pt) != {"n", "kQ", "xiq_over_omega"}:
                raise ConfigError(
                    "bo_points", f"expected objects with keys n, kQ, xiq_over_omega, got {pt!r}"
                )
            parsed_pts.append({
                "n": _require_int(pt["n"], "bo_points.n", 0),
                "kQ": _require_number(pt["kQ"], "bo_points.kQ"),
                "xiq_over_omega": _require_number(pt["xiq_over_omega"], "bo_points.xiq_over_omega"),
            })
        cfg.bo_points = parsed_pts
    if "fd_step" in raw:
        cfg.fd_step = _require_number(raw["fd_step"], "fd_step", 0.0, strict_min=True)
    if "adiabatic_alpha" in raw:
        cfg.adiabatic_alpha = _parse_alpha(raw["adiabatic_alpha"], "adiabatic_alpha")
    if "potential" in raw:
        pot = raw["potential"]
        if not isinstance(pot, dict) or set(pot) - {"n", "points", "kQ_max", "xiq_over_delta_max"}:
            raise ConfigError("potential", "expected keys among n, points, kQ_max, xiq_over_delta_max")
        if "n" in pot:
            cfg.scan_n = _require_int(pot["n"], "potential.n", 0)
        if "points" in pot:
            cfg.scan_points = _require_int(pot["points"], "potential.points", 2)
        if "kQ_max" in pot:
            cfg.scan_kQ_max = _require_number(pot["kQ_max"], "potential.kQ_max", 0.0, strict_min=True)
        if "xiq_over_delta_max" in pot:
            cfg.scan_xiq_over_delta_max = _require_number(
                pot["xiq_over_delta_max"], "potential.xiq_over_delta_max", 0.0, strict_min=True
            )
    if "boundary_band" in raw:
        cfg.boundary_band = _require_int(raw["boundary_band"], "boundary_band", 0)
    if "output" in raw:
        out = raw["output"]
        if not isinstance(out, dict) or set(out) - {"path", "format"}:
            raise ConfigError("output", "expected an object with keys 'path' and/or 'format'")
        if "path" in out:
            cfg.output_path = str(out["path"])
        if "format" in out:
            if out["format"] not in ("csv", "json"):
                raise ConfigError("output.format", f"must be 'csv' or 'json', got {out['format']!r}")
            cfg.output_format = out["format"]

    _validate_semantics(cfg)
    return cfg


def _validate_semantics(cfg: ScenarioConfig) -> None:
    p = cfg.params
    if cfg.scenario in ("population", "population-decay"):
        for alpha in cfg.alphas:
            d = cfg.photon_truncation or default_coherent_truncation(alpha)
            if d < 2:
                raise ConfigError("photon_truncation", "must be >= 2")
            deficit = coherent_tail_deficit(alpha, d)
            if deficit > cfg.truncation_tolerance:
                raise ConfigError(
                    "alphas",
                    f"alpha={alpha} loses weight {deficit:.3e} at truncation {d} "
                    f"(tolerance {cfg.truncation_tolerance:.1e}); raise photon_truncation",
                )
    if cfg.scenario.startswith("entanglement"):
        if not p.delta > 0:
            raise ConfigError(
                "params", f"entanglement scenarios need detuning omega - Omega > 0, got {p.delta!r}"
            )
    if cfg.scenario == "entanglement-gsweep" and not cfg.G_list:
        cfg.G_list = [i * 8e4 for i in range(26)]  # 0 .. 2e6 rad/s
    if cfg.scenario == "potential-scan" and p.delta == 0.0:
        raise ConfigError("params", "potential-scan needs nonzero detuning omega - Omega")


def load_config(path: str | Path) -> ScenarioConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config", "top-level JSON value must be an object")
    return parse_config_dict(raw)


def default_config_dict(scenario: str) -> dict:
    """A complete, runnable config document for ``scenario``."""
    if scenario not in SCENARIOS:
        raise ConfigError("scenario", f"unknown scenario {scenario!r}")
    doc: dict = {"scenario": scenario, "params": _base_params(scenario)}
    if scenario in ("population", "population-decay"):
        doc["alphas"] = [0.0, 1.0, 3.0, 5.0]
    if scenario.startswith("entanglement"):
        doc["truncations"] = {"c": 8, "b": 8}
        doc["grid"] = {"t_start": 0.0, "t_end": 1e-4, "n_steps": 600, "units": "seconds"}
        doc["G"] = 5e3
    if scenario == "entanglement-gsweep":
        doc["t_fixed"] = 1e-4
        doc["G_list"] = [i * 8e4 for i in range(26)]
    if scenario == "entanglement-thermal":
        doc["beta"] = 1e14
    if scenario == "dressed-table" or scenario == "kerr-spectrum":
        doc["dressed_n_max"] = 15
    if scenario == "adiabatic-check":
        doc["adiabatic_alpha"] = 1.0
        doc["nm_pairs"] = [list(p) for p in _DEFAULT_NM_PAIRS]
        doc["bo_points"] = [dict(p) for p in _DEFAULT_BO_POINTS]
    if scenario == "potential-scan":
        doc["potential"] = {"n": 0, "points": 50, "kQ_max": 0.03, "xiq_over_delta_max": 1e-3}
    return doc
