"""Time propagation, observables, and entropy trajectories.

Hermitian Hamiltonians are propagated through one spectral decomposition
(exact up to the eigensolver residual); non-Hermitian ones through repeated
application of a fixed-step matrix exponential with a norm-jump guard.
Pure snapshots are defined up to a physically irrelevant global phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import NumericalGuardError
from .hilbert import (
    OperatorMatrix,
    QuantumState,
    eig_hermitian,
    expm,
    partial_trace,
    von_neumann_entropy,
)

__all__ = [
    "TimeGrid",
    "Trajectory",
    "evolve",
    "excited_population",
    "leakage",
    "entropy_trajectory",
    "DEFAULT_BOUNDARY_BAND",
    "LEAKAGE_WARN_THRESHOLD",
]

DEFAULT_BOUNDARY_BAND = 2
LEAKAGE_WARN_THRESHOLD = 1e-4


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid in rescaled units (omega0 * t_SI unless stated)."""

    t_start: float
    t_end: float
    n_steps: int

    def __post_init__(self):
        if not self.t_end > self.t_start:
            raise ValueError("t_end must exceed t_start")
        if self.n_steps < 2:
            raise ValueError("n_steps must be >= 2")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_steps)

    @property
    def dt(self) -> float:
        return (self.t_end - self.t_start) / (self.n_steps - 1)


@dataclass
class Trajectory:
    """Time grid plus named observable series and a metadata snapshot."""

    grid: TimeGrid
    columns: dict[str, np.ndarray]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, col in self.columns.items():
            if len(col) != self.grid.n_steps:
                raise ValueError(
                    f"column {name!r} has {len(col)} entries, expected {self.grid.n_steps}"
                )
        if "norm" in self.columns:
            nrm = self.columns["norm"]
            if np.any(nrm > 1.0 + 1e-9) or np.any(nrm < 0.0):
                raise ValueError("norm column outside [0, 1 + 1e-9]")
            if np.any(nrm == 0.0):
                self.metadata.setdefault("warnings", []).append(
                    "norm underflowed to zero during decay evolution"
                )


def _spectral_snapshots(h: OperatorMatrix, initial: QuantumState, grid: TimeGrid):
    vals, vecs = eig_hermitian(h)
    times = grid.times - grid.t_start
    if initial.kind == "pure":
        coeffs = vecs.conj().T @ initial.vector
        # Reference energy keeps the evaluated phases near the populated
        # shell; this is a pure global-phase gauge.
        e_ref = float(np.sum(np.abs(coeffs) ** 2 * vals))
        shifted = vals - e_ref
        for t in times:
            psi = vecs @ (np.exp(-1j * shifted * t) * coeffs)
            yield QuantumState.pure(initial.dims, psi, strict=False)
    else:
        rho_eig = vecs.conj().T @ initial.matrix @ vecs
        for t in times:
            phases = np.exp(-1j * vals * t)
            rho_t = vecs @ (np.outer(phases, phases.conj()) * rho_eig) @ vecs.conj().T
            yield QuantumState.mixed(initial.dims, rho_t, strict=False)


def _stepping_snapshots(h: OperatorMatrix, initial: QuantumState, grid: TimeGrid):
    u = expm(-1j * grid.dt * h).entries
    if initial.kind == "pure":
        psi = initial.vector.copy()
        prev = float(np.linalg.norm(psi))
        yield QuantumState.pure(initial.dims, psi, strict=False)
        for _ in range(grid.n_steps - 1):
            psi = u @ psi
            cur = float(np.linalg.norm(psi))
            if cur > 1.1 * prev:
                raise NumericalGuardError(
                    f"norm jumped {prev!r} -> {cur!r} in one step; evolution unstable"
                )
            prev = cur
            yield QuantumState.pure(initial.dims, psi, strict=False)
    else:
        rho = initial.matrix.copy()
        prev = float(np.trace(rho).real)
        yield QuantumState.mixed(initial.dims, rho, strict=False)
        for _ in range(grid.n_steps - 1):
            rho = u @ rho @ u.conj().T
            rho = 0.5 * (rho + rho.conj().T)
            cur = float(np.trace(rho).real)
            if cur > 1.1 * prev:
                raise NumericalGuardError(
                    f"trace jumped {prev!r} -> {cur!r} in one step; evolution unstable"
                )
            prev = cur
            yield QuantumState.mixed(initial.dims, rho, strict=False)


def evolve(h: OperatorMatrix, initial: QuantumState, grid: TimeGrid) -> list[QuantumState]:
    """Propagate under exp(-iHt) and return one snapshot per grid time.

    Mixed inputs evolve by conjugation with the propagator.  The first
    snapshot is the initial state itself.
    """
    if h.dims.total != initial.dims.total:
        raise ValueError(
            f"operator dimension {h.dims.total} != state dimension {initial.dims.total}"
        )
    maker = _spectral_snapshots if h.hermitian_hint else _stepping_snapshots
    return list(maker(h, initial, grid))


def excited_population(s: QuantumState, atom_slot: int = 0) -> float:
    """Expectation of the embedded |e><e| projector (raw, unrenormalized)."""
    facs = s.dims.factors
    if facs[atom_slot] != 2:
        raise ValueError(f"factor {atom_slot} has dimension {facs[atom_slot]}, expected 2")
    probs = s.probabilities().reshape(facs)
    return float(np.take(probs, 0, axis=atom_slot).sum())


@lru_cache(maxsize=64)
def _edge_mask(factors: tuple[int, ...], band: int) -> np.ndarray:
    """Flat mask of basis states with any mode index within ``band`` of its edge."""
    mask = np.zeros(factors, dtype=bool)
    for axis, d in enumerate(factors):
        if d <= band:
            mask[...] = True
            break
        sel = [slice(None)] * len(factors)
        sel[axis] = slice(d - band, d)
        mask[tuple(sel)] = True
    out = mask.reshape(-1)
    out.flags.writeable = False
    return out


def leakage(s: QuantumState, boundary_band: int = DEFAULT_BOUNDARY_BAND) -> float:
    """Population within ``boundary_band`` of any truncation edge."""
    if boundary_band < 0:
        raise ValueError("boundary band must be >= 0")
    if boundary_band == 0:
        return 0.0
    mask = _edge_mask(s.dims.factors, boundary_band)
    return float(s.probabilities()[mask].sum())


def entropy_trajectory(
    h: OperatorMatrix,
    initial: QuantumState,
    grid: TimeGrid,
    keep,
    boundary_band: int = DEFAULT_BOUNDARY_BAND,
) -> Trajectory:
    """Von Neumann entropy of the reduced state over the kept factors vs time.

    For mixed initial states the density matrix is evolved and the entropy
    of its reduction is reported directly.  Columns: entropy, norm,
    leakage.  A leakage maximum above the warning threshold is recorded in
    the metadata instead of failing the run.
    """
    ent = np.empty(grid.n_steps)
    nrm = np.empty(grid.n_steps)
    leak = np.empty(grid.n_steps)
    for i, s in enumerate(evolve(h, initial, grid)):
        ent[i] = von_neumann_entropy(partial_trace(s, keep))
        nrm[i] = s.norm()
        leak[i] = leakage(s, boundary_band)
    metadata = {
        "keep": tuple(np.atleast_1d(keep).tolist()),
        "boundary_band": boundary_band,
        "entropy_log_base": "e",
        "leakage_max": float(leak.max()),
    }
    if leak.max() > LEAKAGE_WARN_THRESHOLD:
        metadata["warnings"] = [
            f"max leakage {leak.max():.3e} exceeds {LEAKAGE_WARN_THRESHOLD:.0e}; "
            "increase truncations"
        ]
    return Trajectory(grid, {"entropy": ent, "norm": nrm, "leakage": leak}, metadata)
