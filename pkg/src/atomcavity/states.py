"""Factories for mode operators and initial states.

Basis conventions, asserted in the test suite:

* atom: |e> = (1, 0), |g> = (0, 1), sigma_z |e> = +|e>;
* bosonic modes: Fock basis |0> .. |d-1>, ascending;
* composite ordering: atom factor first, then photon, then motional modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TruncationError
from .hilbert import OperatorMatrix, QuantumState, SpaceDims, kron

__all__ = [
    "ModeSpec",
    "MODE_LABELS",
    "annihilation",
    "creation",
    "number_operator",
    "pauli",
    "embed",
    "coherent_state",
    "coherent_tail_deficit",
    "default_coherent_truncation",
    "thermal_state",
    "product_state",
]

MODE_LABELS = ("photon", "mirror_phonon", "atom_com", "mirror_mode")

DEFAULT_TRUNCATION_TOLERANCE = 1e-8


@dataclass(frozen=True)
class ModeSpec:
    """A truncated bosonic mode: states |0> .. |truncation-1>."""

    label: str
    truncation: int

    def __post_init__(self):
        if self.label not in MODE_LABELS:
            raise ValueError(f"unknown mode label {self.label!r}; expected one of {MODE_LABELS}")
        if self.truncation < 2:
            raise ValueError(f"mode truncation must be >= 2, got {self.truncation}")

    @property
    def dims(self) -> SpaceDims:
        return SpaceDims((self.truncation,))


def annihilation(spec: ModeSpec) -> OperatorMatrix:
    """Truncated lowering operator: <n-1|a|n> = sqrt(n)."""
    d = spec.truncation
    a = np.zeros((d, d), dtype=np.complex128)
    for n in range(1, d):
        a[n - 1, n] = math.sqrt(n)
    return OperatorMatrix(spec.dims, a)


def creation(spec: ModeSpec) -> OperatorMatrix:
    return annihilation(spec).dagger()


def number_operator(spec: ModeSpec) -> OperatorMatrix:
    d = spec.truncation
    return OperatorMatrix(spec.dims, np.diag(np.arange(d, dtype=np.complex128)), True)


_PAULI = {
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "plus": np.array([[0, 1], [0, 0]], dtype=np.complex128),
    "minus": np.array([[0, 0], [1, 0]], dtype=np.complex128),
}


def pauli(which: str) -> OperatorMatrix:
    """Pauli / atomic ladder matrix in the (|e>, |g>) basis."""
    if which not in _PAULI:
        raise ValueError(f"unknown Pauli label {which!r}; expected one of {sorted(_PAULI)}")
    return OperatorMatrix(SpaceDims((2,)), _PAULI[which], which in ("z", "x"))


def identity(dim: int) -> OperatorMatrix:
    return OperatorMatrix(SpaceDims((dim,)), np.eye(dim, dtype=np.complex128), True)


def embed(op: OperatorMatrix, slot: int, dims: SpaceDims) -> OperatorMatrix:
    """Lift a single-factor operator to the composite space (identity elsewhere)."""
    if not 0 <= slot < dims.n_factors:
        raise ValueError(f"slot {slot} out of range for {dims.n_factors} factors")
    if op.dims.total != dims.factors[slot]:
        raise ValueError(
            f"operator dimension {op.dims.total} != factor dimension {dims.factors[slot]}"
        )
    out = op if slot == 0 else identity(math.prod(dims.factors[:slot]))
    if slot != 0:
        out = OperatorMatrix(SpaceDims(dims.factors[:slot]), out.entries, True)
        out = kron(out, op)
    if slot != dims.n_factors - 1:
        rest = math.prod(dims.factors[slot + 1 :])
        tail = OperatorMatrix(SpaceDims(dims.factors[slot + 1 :]), np.eye(rest), True)
        out = kron(out, tail)
    return OperatorMatrix(dims, out.entries, op.hermitian_hint)


def _coherent_amplitudes(alpha: complex, d: int) -> np.ndarray:
    # c_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!), built by stable recurrence.
    c = np.empty(d, dtype=np.complex128)
    c[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, d):
        c[n] = c[n - 1] * alpha / math.sqrt(n)
    return c


def coherent_tail_deficit(alpha: complex, truncation: int) -> float:
    """Probability weight of the coherent state beyond the truncation."""
    c = _coherent_amplitudes(alpha, truncation)
    return max(1.0 - math.fsum(np.abs(c) ** 2), 0.0)


def default_coherent_truncation(alpha: complex) -> int:
    a = abs(alpha)
    return math.ceil(a * a + 8.0 * a + 10.0)


def coherent_state(
    alpha: complex,
    spec: ModeSpec,
    truncation_tolerance: float = DEFAULT_TRUNCATION_TOLERANCE,
) -> QuantumState:
    """Truncated coherent state |alpha>, renormalized after truncation.

    Raises :class:`TruncationError` when the truncated tail weight exceeds
    ``truncation_tolerance``; the pre-renormalization deficit is recoverable
    via :func:`coherent_tail_deficit`.
    """
    c = _coherent_amplitudes(alpha, spec.truncation)
    deficit = max(1.0 - math.fsum(np.abs(c) ** 2), 0.0)
    if deficit > truncation_tolerance:
        raise TruncationError(
            "truncation",
            f"coherent state alpha={alpha} loses weight {deficit:.3e} at "
            f"truncation {spec.truncation} (tolerance {truncation_tolerance:.1e})",
        )
    c /= np.linalg.norm(c)
    return QuantumState.pure(spec.dims, c)


def fock_state(n: int, spec: ModeSpec) -> QuantumState:
    if not 0 <= n < spec.truncation:
        raise ValueError(f"Fock index {n} outside truncation {spec.truncation}")
    v = np.zeros(spec.truncation, dtype=np.complex128)
    v[n] = 1.0
    return QuantumState.pure(spec.dims, v)


def atom_state(which: str) -> QuantumState:
    """|e> or |g>."""
    if which not in ("e", "g"):
        raise ValueError(f"atom state must be 'e' or 'g', got {which!r}")
    v = np.array([1.0, 0.0] if which == "e" else [0.0, 1.0], dtype=np.complex128)
    return QuantumState.pure(SpaceDims((2,)), v)


def thermal_state(beta: float, mode_freq: float, spec: ModeSpec) -> QuantumState:
    """Boltzmann-weighted Fock mixture exp(-beta n w)/Z on the truncated basis."""
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if mode_freq <= 0:
        raise ValueError(f"mode frequency must be positive, got {mode_freq}")
    exponents = -beta * mode_freq * np.arange(spec.truncation, dtype=float)
    # Shift by the max exponent (= 0 here) is a no-op but keeps intent clear
    # if a chemical-potential-like offset is ever added.
    weights = np.exp(exponents)
    weights /= weights.sum()
    return QuantumState.mixed(spec.dims, np.diag(weights.astype(np.complex128)))


def thermal_mean_occupancy(state: QuantumState) -> float:
    return float(np.sum(np.arange(state.dims.total) * state.probabilities().real))


def product_state(parts: list[QuantumState]) -> QuantumState:
    """Tensor product; any mixed part promotes the whole product to mixed."""
    if not parts:
        raise ValueError("product_state needs at least one part")
    dims = SpaceDims(tuple(f for p in parts for f in p.dims.factors))
    if all(p.kind == "pure" for p in parts):
        v = parts[0].vector
        for p in parts[1:]:
            v = np.kron(v, p.vector)
        return QuantumState.pure(dims, v)
    m = parts[0].promote().matrix
    for p in parts[1:]:
        m = np.kron(m, p.promote().matrix)
    return QuantumState.mixed(dims, m)
