"""Dense complex linear algebra over composite finite-dimensional Hilbert spaces.

Values are immutable after construction (backing arrays are marked
read-only) and all operations are pure functions, so everything here is
safe to use from multiple threads.

Entropy uses the natural logarithm throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from . import kernels
from .errors import CapacityError

__all__ = [
    "SpaceDims",
    "OperatorMatrix",
    "QuantumState",
    "kron",
    "eig_hermitian",
    "expm",
    "partial_trace",
    "von_neumann_entropy",
    "check_capacity",
    "get_dim_cap",
    "set_dim_cap",
    "ENTROPY_EIGENVALUE_FLOOR",
]

# Eigenvalues below this floor contribute zero entropy (avoids 0*ln 0).
ENTROPY_EIGENVALUE_FLOOR = 1e-12

# Hard cap on composite dimension; truncations are <= ~100 per mode so
# composite spaces stay small and dense storage is deliberate.
_DEFAULT_DIM_CAP = 16384
_dim_cap = _DEFAULT_DIM_CAP


def get_dim_cap() -> int:
    return _dim_cap


def set_dim_cap(cap: int) -> None:
    """Set the composite-dimension cap. Intended for startup configuration."""
    global _dim_cap
    if cap < 2:
        raise ValueError(f"dimension cap must be >= 2, got {cap}")
    _dim_cap = int(cap)


def check_capacity(total: int) -> None:
    if total > _dim_cap:
        raise CapacityError(
            f"composite dimension {total} exceeds cap {_dim_cap}; "
            "reduce mode truncations or raise the cap"
        )


_check_capacity = check_capacity


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.complex128)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class SpaceDims:
    """Ordered tensor-factor dimensions of a composite space."""

    factors: tuple[int, ...]

    def __post_init__(self):
        if not self.factors:
            raise ValueError("SpaceDims needs at least one factor")
        facs = tuple(int(f) for f in self.factors)
        if any(f < 1 for f in facs):
            raise ValueError(f"factor dimensions must be >= 1, got {facs}")
        object.__setattr__(self, "factors", facs)

    @property
    def total(self) -> int:
        return math.prod(self.factors)

    @property
    def n_factors(self) -> int:
        return len(self.factors)

    def __mul__(self, other: "SpaceDims") -> "SpaceDims":
        return SpaceDims(self.factors + other.factors)


def _hermiticity_defect(a: np.ndarray) -> float:
    scale = np.abs(a).max()
    if scale == 0.0:
        return 0.0
    return np.abs(a - a.conj().T).max() / scale


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense complex operator over a composite space.

    ``hermitian_hint`` is verified at construction: if set, the matrix must
    be Hermitian to 1e-12 relative to its largest entry.  ``meta`` carries
    builder annotations (unit scale, recorded scalar shifts) and does not
    participate in equality.
    """

    dims: SpaceDims
    entries: np.ndarray
    hermitian_hint: bool = False
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        a = np.asarray(self.entries)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"operator must be square, got shape {a.shape}")
        if a.shape[0] != self.dims.total:
            raise ValueError(
                f"matrix side {a.shape[0]} != composite dimension {self.dims.total}"
            )
        _check_capacity(self.dims.total)
        a = _readonly(a)
        object.__setattr__(self, "entries", a)
        if self.hermitian_hint and _hermiticity_defect(a) > 1e-12:
            raise ValueError("hermitian_hint set but matrix is not Hermitian to 1e-12")

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.dims, self.entries.conj().T, self.hermitian_hint)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if other.dims.total != self.dims.total:
            raise ValueError("dimension mismatch in operator product")
        return OperatorMatrix(self.dims, self.entries @ other.entries)

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        hint = self.hermitian_hint and other.hermitian_hint
        return OperatorMatrix(self.dims, self.entries + other.entries, hint)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        hint = self.hermitian_hint and other.hermitian_hint
        return OperatorMatrix(self.dims, self.entries - other.entries, hint)

    def __mul__(self, scalar: complex) -> "OperatorMatrix":
        hint = self.hermitian_hint and complex(scalar).imag == 0.0
        return OperatorMatrix(self.dims, self.entries * scalar, hint)

    __rmul__ = __mul__


@dataclass(frozen=True)
class QuantumState:
    """Pure state vector or density matrix over a composite space.

    Use the :meth:`pure` / :meth:`mixed` factories.  ``strict=False`` relaxes
    the unit-norm (unit-trace) requirement to ``<= 1 + 1e-9``, which is the
    regime produced by non-Hermitian decay evolution.
    """

    dims: SpaceDims
    kind: str
    vector: np.ndarray | None = None
    matrix: np.ndarray | None = None

    @classmethod
    def pure(cls, dims: SpaceDims, vector, *, strict: bool = True) -> "QuantumState":
        v = np.asarray(vector, dtype=np.complex128).reshape(-1)
        if v.size != dims.total:
            raise ValueError(f"vector length {v.size} != dimension {dims.total}")
        nrm = float(np.linalg.norm(v))
        if strict:
            if abs(nrm - 1.0) > 1e-9:
                raise ValueError(f"pure state norm {nrm!r} not within 1e-9 of 1")
        elif not 0.0 <= nrm <= 1.0 + 1e-9:
            raise ValueError(f"pure state norm {nrm!r} outside (0, 1 + 1e-9]")
        return cls(dims, "pure", vector=_readonly(v))

    @classmethod
    def mixed(
        cls,
        dims: SpaceDims,
        matrix,
        *,
        strict: bool = True,
        check_psd: bool = False,
    ) -> "QuantumState":
        m = np.asarray(matrix, dtype=np.complex128)
        if m.shape != (dims.total, dims.total):
            raise ValueError(f"matrix shape {m.shape} != ({dims.total}, {dims.total})")
        if _hermiticity_defect(m) > 1e-12:
            raise ValueError("density matrix not Hermitian to 1e-12")
        tr = float(np.trace(m).real)
        if strict:
            if abs(tr - 1.0) > 1e-9:
                raise ValueError(f"density-matrix trace {tr!r} not within 1e-9 of 1")
        elif not 0.0 <= tr <= 1.0 + 1e-9:
            raise ValueError(f"density-matrix trace {tr!r} outside (0, 1 + 1e-9]")
        if check_psd:
            lo = float(np.linalg.eigvalsh(m)[0])
            if lo < -1e-10:
                raise ValueError(f"density matrix has eigenvalue {lo} < -1e-10")
        return cls(dims, "mixed", matrix=_readonly(m))

    def norm(self) -> float:
        """Vector norm for pure states, trace for mixed states."""
        if self.kind == "pure":
            return float(np.linalg.norm(self.vector))
        return float(np.trace(self.matrix).real)

    def promote(self) -> "QuantumState":
        """Return the state as a density matrix (projector for pure input)."""
        if self.kind == "mixed":
            return self
        rho = np.outer(self.vector, self.vector.conj())
        return QuantumState(self.dims, "mixed", matrix=_readonly(rho))

    def probabilities(self) -> np.ndarray:
        """Basis-state populations (diagonal of the density matrix)."""
        if self.kind == "pure":
            return np.abs(self.vector) ** 2
        return np.diagonal(self.matrix).real.copy()


def kron(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    """Kronecker product; factor lists concatenate."""
    _check_capacity(a.dims.total * b.dims.total)
    return OperatorMatrix(
        a.dims * b.dims,
        np.kron(a.entries, b.entries),
        a.hermitian_hint and b.hermitian_hint,
    )


def eig_hermitian(h: OperatorMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Spectral decomposition of a Hermitian operator.

    Returns eigenvalues in ascending order and the unitary matrix of
    eigenvectors (columns).  The input must carry a verified
    ``hermitian_hint``.
    """
    if not h.hermitian_hint:
        raise ValueError("eig_hermitian requires an operator built with hermitian_hint")
    try:
        vals, vecs = np.linalg.eigh(h.entries)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ValueError(f"Hermitian eigendecomposition failed: {exc}") from exc
    return vals, vecs


def expm(a: OperatorMatrix) -> OperatorMatrix:
    """Matrix exponential via scaling-and-squaring."""
    if not np.all(np.isfinite(a.entries)):
        raise ValueError("expm input has non-finite entries")
    result = scipy.linalg.expm(np.asarray(a.entries))
    if not np.all(np.isfinite(result)):
        raise OverflowError("expm overflowed; operator norm too large")
    return OperatorMatrix(a.dims, result)


def _normalize_keep(keep: Iterable[int] | int, n_factors: int) -> tuple[int, ...]:
    if isinstance(keep, (int, np.integer)):
        keep = (int(keep),)
    keep = tuple(sorted({int(k) for k in keep}))
    if any(k < 0 or k >= n_factors for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n_factors} factors")
    if not keep:
        raise ValueError("keep set must be non-empty")
    if len(keep) == n_factors:
        raise ValueError("keep set must be a proper subset of the factors")
    return keep


def partial_trace(s: QuantumState, keep: Iterable[int] | int) -> QuantumState:
    """Reduced density matrix over the kept factors (original factor order).

    The result is Hermitian with the input's trace; positivity holds by
    construction up to rounding and is enforced downstream by
    :func:`von_neumann_entropy`.
    """
    facs = s.dims.factors
    keep_t = _normalize_keep(keep, len(facs))
    traced = tuple(i for i in range(len(facs)) if i not in keep_t)
    d_keep = math.prod(facs[i] for i in keep_t)
    d_rest = math.prod(facs[i] for i in traced)
    out_dims = SpaceDims(tuple(facs[i] for i in keep_t))

    if s.kind == "pure":
        psi = s.vector.reshape(facs)
        psi2 = np.ascontiguousarray(
            np.transpose(psi, keep_t + traced).reshape(d_keep, d_rest)
        )
        rho = kernels.pure_reduced(psi2)
    else:
        n = len(facs)
        perm = keep_t + traced
        rho_full = s.matrix.reshape(facs + facs)
        rho_perm = np.ascontiguousarray(
            np.transpose(rho_full, perm + tuple(n + p for p in perm)).reshape(
                d_keep * d_rest, d_keep * d_rest
            )
        )
        rho = kernels.mixed_reduced(rho_perm, d_keep, d_rest)

    # Symmetrize away rounding-level asymmetry before constructing the state.
    rho = 0.5 * (rho + rho.conj().T)
    return QuantumState(out_dims, "mixed", matrix=_readonly(rho))


def von_neumann_entropy(rho: QuantumState) -> float:
    """S = -sum(lam * ln lam) over eigenvalues above the entropy floor."""
    if rho.kind != "mixed":
        raise ValueError("von_neumann_entropy expects a density matrix")
    lams = np.linalg.eigvalsh(rho.matrix)
    if lams[0] < -1e-8:
        raise ValueError(
            f"density matrix has eigenvalue {lams[0]!r} < -1e-8; state corrupted"
        )
    lams = lams[lams > ENTROPY_EIGENVALUE_FLOOR]
    if lams.size == 0:
        return 0.0
    entropy = float(-(lams * np.log(lams)).sum())
    return entropy if entropy > 0.0 else 0.0
