"""Regime Hamiltonian builders, dressed states, adiabatic potentials, diagnostics.

All matrices and energies produced here are rescaled by hbar*omega0 and are
therefore dimensionless; positions stay in meters.  Builders are
deterministic: identical inputs produce bit-identical matrices.

Frames
------
The effective atom-photon Hamiltonians commute with the excitation number
C = a^dag a + sigma_z/2.  ``frame="excitation"`` subtracts omega*C
symbolically during assembly, which removes the dominant diagonal scale and
keeps the tiny mirror-induced splittings exactly representable in double
precision.  The two frames are unitarily equivalent through a product of
local phase rotations, so populations, norms, and entanglement entropies
are identical in both; only basis-coherence phases differ.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegeneracyError
from .hilbert import OperatorMatrix, QuantumState, SpaceDims, check_capacity
from .params import HBAR, DecayShifts, PhysicalParams, derive_couplings
from .states import ModeSpec, annihilation, embed, number_operator, pauli

__all__ = [
    "DressedPair",
    "dressed_pair",
    "build_node_hamiltonian",
    "build_antinode_hamiltonian",
    "motion_hamiltonian",
    "invariant_block_indices",
    "adiabatic_potential_exact",
    "adiabatic_potential_approx",
    "born_oppenheimer_ratio",
    "mirror_adiabaticity_ratio",
]

FRAMES = ("lab", "excitation")


def _check_frame(frame: str) -> None:
    if frame not in FRAMES:
        raise ValueError(f"frame must be one of {FRAMES}, got {frame!r}")


@dataclass(frozen=True)
class DressedPair:
    """Analytic eigensystem of one invariant atom-photon subspace.

    Energies are rescaled by hbar*omega0.  ``h11`` belongs to the
    (n+1)-photon ground-atom state, ``h22`` to the n-photon excited-atom
    state.  ``theta`` is the mixing angle; it is evaluated from a
    cancellation-free form of h11 - h22, so it stays meaningful even when
    the stored diagonal difference underflows the spacing of the much
    larger diagonal entries.
    """

    n: int
    h11: float
    h22: float
    h12: float
    e_plus: float
    e_minus: float
    theta: float
    diag_gap: float  # cancellation-free h11 - h22
    radical: float  # sqrt(diag_gap^2/4 + h12^2); half the level splitting

    @property
    def splitting(self) -> float:
        # Not e_plus - e_minus: that subtraction underflows the spacing of
        # the large diagonal part whenever the splitting is tiny.
        return 2.0 * self.radical

    def validate(self) -> None:
        scale = max(abs(self.h11), abs(self.h22), abs(self.h12), 1e-300)
        if self.e_plus < self.e_minus:
            raise ValueError("dressed pair ordering violated: e_plus < e_minus")
        mean = 0.5 * (self.h11 + self.h22)
        r = math.hypot(0.5 * self.diag_gap, self.h12)
        if abs(self.radical - r) > 1e-12 * max(r, 1e-300):
            raise ValueError("radical inconsistent with block entries")
        if abs(self.e_plus - (mean + r)) > 1e-12 * scale:
            raise ValueError("e_plus inconsistent with block entries")
        if abs(self.e_minus - (mean - r)) > 1e-12 * scale:
            raise ValueError("e_minus inconsistent with block entries")
        if self.diag_gap != 0.0:
            resid = math.tan(self.theta) * self.diag_gap - 2.0 * self.h12
            if abs(resid) > 1e-9 * max(abs(2.0 * self.h12), 1e-300):
                raise ValueError("mixing angle inconsistent with block entries")


def dressed_pair(p: PhysicalParams, n: int, frame: str = "lab") -> DressedPair:
    """Invariant-subspace block entries and eigensystem for photon index n."""
    if n < 0:
        raise ValueError(f"photon index must be >= 0, got {n}")
    _check_frame(frame)
    cpl = derive_couplings(p)
    s = HBAR / (2.0 * p.m * p.omega_m**2 * p.omega0)
    wt, Wt = p.omega / p.omega0, p.Omega / p.omega0
    a11 = s * (cpl.xi**2 * (n + 1) ** 2 + cpl.g_pi**2 * (n + 1))
    a22 = s * (cpl.xi**2 * n**2 + cpl.g_pi**2 * (n + 1))
    h12 = -s * cpl.g_pi * cpl.xi * (2 * n + 1) * math.sqrt(n + 1)
    if frame == "lab":
        h11 = wt * (n + 1) - 0.5 * Wt - a11
        h22 = wt * n + 0.5 * Wt - a22
    else:
        h11 = 0.5 * (wt - Wt) - a11
        h22 = -0.5 * (wt - Wt) - a22
    # h11 - h22 without the catastrophic cancellation of the large diagonals.
    diag_gap = (wt - Wt) - s * cpl.xi**2 * (2 * n + 1)
    mean = 0.5 * (h11 + h22)
    r = math.hypot(0.5 * diag_gap, h12)
    theta = math.atan2(2.0 * h12, diag_gap)
    return DressedPair(n, h11, h22, h12, mean + r, mean - r, theta, diag_gap, r)


def _atom_photon_pieces(d: int):
    check_capacity(2 * d)
    dims = SpaceDims((2, d))
    ph = ModeSpec("photon", d)
    a = annihilation(ph)
    n_op = embed(number_operator(ph), 1, dims)
    sz = embed(pauli("z"), 0, dims)
    # |e><e| projector on the atom factor.
    pe = 0.5 * (sz + embed(OperatorMatrix(SpaceDims((2,)), np.eye(2), True), 0, dims))
    # a^dag sigma^- + a sigma^+, atom factor first.
    x = np.kron(pauli("minus").entries, a.dagger().entries) + np.kron(
        pauli("plus").entries, a.entries
    )
    x_op = OperatorMatrix(dims, x, True)
    return dims, n_op, sz, pe, x_op


def _decay_part(
    dims: SpaceDims,
    n_op: OperatorMatrix,
    pe: OperatorMatrix,
    decay: DecayShifts,
    omega0: float,
) -> np.ndarray:
    """Anti-Hermitian additions: -i kappa n - i Gamma/2 |e><e| (rescaled)."""
    return (-1j * decay.kappa / omega0) * n_op.entries + (
        -1j * 0.5 * decay.gamma / omega0
    ) * pe.entries


def build_node_hamiltonian(
    p: PhysicalParams,
    photon_truncation: int,
    n_m: int = 0,
    decay: DecayShifts | None = None,
    frame: str = "lab",
) -> OperatorMatrix:
    """Effective atom-photon Hamiltonian for the atom at a field node.

    H = omega*n + Omega/2*sigma_z - pi^2/(2 m omega_m^2), with
    pi = xi*n + g_pi*(a^dag sigma^- + h.c.) (units of hbar absorbed).  The
    state-independent phonon offset omega_m*(n_m + 1/2) is not added to the
    matrix; it is recorded under ``meta["fock_shift"]``.
    """
    if photon_truncation < 2:
        raise ValueError("photon truncation must be >= 2")
    if n_m < 0:
        raise ValueError("phonon index n_m must be >= 0")
    _check_frame(frame)
    cpl = derive_couplings(p)
    dims, n_op, sz, pe, x_op = _atom_photon_pieces(photon_truncation)
    s = HBAR / (2.0 * p.m * p.omega_m**2 * p.omega0)
    pi_op = cpl.xi * n_op.entries + cpl.g_pi * x_op.entries
    h = -s * (pi_op @ pi_op)
    if frame == "lab":
        h += (p.omega / p.omega0) * n_op.entries + 0.5 * (p.Omega / p.omega0) * sz.entries
    else:
        h += -0.5 * (p.delta / p.omega0) * sz.entries
    hermitian = True
    if decay is not None and (decay.gamma != 0.0 or decay.kappa != 0.0):
        h = h + _decay_part(dims, n_op, pe, decay, p.omega0)
        hermitian = False
    meta = {
        "omega0": p.omega0,
        "frame": frame,
        "n_m": n_m,
        "fock_shift": (n_m + 0.5) * p.omega_m / p.omega0,
    }
    return OperatorMatrix(dims, h, hermitian, meta)


def build_antinode_hamiltonian(
    p: PhysicalParams,
    photon_truncation: int,
    decay: DecayShifts | None = None,
    chi_override: float | None = None,
    frame: str = "lab",
) -> OperatorMatrix:
    """Jaynes-Cummings Hamiltonian with the mirror-induced Kerr shift.

    H = omega*n + Omega/2*sigma_z + g*(a^dag sigma^- + h.c.) - chi*n^2,
    where chi defaults to the derived hbar*xi^2/(2 m omega_m^2) and may be
    overridden (chi_override, rad/s; 0 gives the bare Jaynes-Cummings
    matrix exactly).
    """
    if photon_truncation < 2:
        raise ValueError("photon truncation must be >= 2")
    _check_frame(frame)
    cpl = derive_couplings(p)
    chi = cpl.chi if chi_override is None else float(chi_override)
    dims, n_op, sz, pe, x_op = _atom_photon_pieces(photon_truncation)
    h = (p.g / p.omega0) * x_op.entries.copy()
    if chi != 0.0:
        h -= (chi / p.omega0) * (n_op.entries @ n_op.entries)
    if frame == "lab":
        h += (p.omega / p.omega0) * n_op.entries + 0.5 * (p.Omega / p.omega0) * sz.entries
    else:
        h += -0.5 * (p.delta / p.omega0) * sz.entries
    hermitian = True
    if decay is not None and (decay.gamma != 0.0 or decay.kappa != 0.0):
        h = h + _decay_part(dims, n_op, pe, decay, p.omega0)
        hermitian = False
    meta = {"omega0": p.omega0, "frame": frame, "chi": chi}
    return OperatorMatrix(dims, h, hermitian, meta)


def invariant_block_indices(n: int, photon_truncation: int) -> tuple[int, int]:
    """Flat indices of (|n+1, g>, |n, e>) in the atom-first composite basis."""
    if not 0 <= n + 1 < photon_truncation:
        raise ValueError(f"block n={n} requires photon truncation > {n + 1}")
    d = photon_truncation
    return d + (n + 1), n  # (g, n+1) lives in the second atom row


def motion_hamiltonian(
    p: PhysicalParams,
    d_c: int,
    d_b: int,
    G_override: float | None = None,
    rwa: bool = False,
    omega_choice: str = "omega",
) -> OperatorMatrix:
    """Coupled mirror-vibration (c) / atom-motion (b) Hamiltonian.

    H = omega_m*(c^dag c + 1/2) + omega'*(b^dag b + 1/2) - G*V with
    V = (c^dag + c)(b^dag + b)^2, or the excitation-preserving
    V = c^dag b^2 + b^dag^2 c under the rotating-wave approximation.
    G is taken from ``G_override`` (rad/s) when given, else from the
    derived closed formula.
    """
    if d_c < 2 or d_b < 2:
        raise ValueError("mode truncations must be >= 2")
    check_capacity(d_c * d_b)
    cpl = derive_couplings(p, omega_choice=omega_choice, require_motion=True)
    G = cpl.G_derived if G_override is None else float(G_override)
    dims = SpaceDims((d_c, d_b))
    c = embed(annihilation(ModeSpec("mirror_mode", d_c)), 0, dims).entries
    b = embed(annihilation(ModeSpec("atom_com", d_b)), 1, dims).entries
    nc = c.conj().T @ c
    nb = b.conj().T @ b
    eye = np.eye(dims.total)
    h = (p.omega_m / p.omega0) * (nc + 0.5 * eye) + (cpl.omega_prime / p.omega0) * (
        nb + 0.5 * eye
    )
    if rwa:
        v = c.conj().T @ b @ b
        v = v + v.conj().T
    else:
        v = (c.conj().T + c) @ ((b.conj().T + b) @ (b.conj().T + b))
    h -= (G / p.omega0) * v
    meta = {
        "omega0": p.omega0,
        "omega_prime": cpl.omega_prime,
        "G": G,
        "rwa": rwa,
        "omega_choice": omega_choice,
    }
    return OperatorMatrix(dims, h, True, meta)


# ---------------------------------------------------------------------------
# Adiabatic potentials of the slow-motion regime.


def adiabatic_potential_exact(p: PhysicalParams, n: int, Q, q, branch: int = +1):
    """Exact adiabatic branch energies U_{+/-,n}(Q, q), rescaled.

    Broadcasts over array-valued Q and q; ``branch`` is +1 or -1.
    """
    if branch not in (+1, -1):
        raise ValueError("branch must be +1 or -1")
    Q = np.asarray(Q, dtype=float)
    q = np.asarray(q, dtype=float)
    cpl = derive_couplings(p)
    w0 = p.omega0
    wt_eff = (p.omega - cpl.xi * q) / w0
    k = (p.omega - cpl.xi * q) / p.c_light
    mean = 0.5 * (2 * n + 1) * wt_eff
    root = np.sqrt(
        (p.g / w0) ** 2 * np.sin(k * Q) ** 2 * (n + 1)
        + 0.25 * (wt_eff - p.Omega / w0) ** 2
    )
    out = mean + branch * root
    return out.item() if out.ndim == 0 else out


def adiabatic_potential_approx(p: PhysicalParams, n: int, Q, q):
    """Large-detuning small-displacement expansion of the upper branch.

    U_{+,n} ~ -(n+1)*xi*q + g^2 k0^2 Q^2 (n+1)/delta
    - xi*q*g^2 k0^2 Q^2 (n+1)/delta^2 (rescaled; the constant offset of the
    exact branch at the origin is dropped).
    """
    delta = p.delta
    if delta == 0.0:
        raise ValueError("adiabatic_potential_approx requires nonzero detuning")
    Q = np.asarray(Q, dtype=float)
    q = np.asarray(q, dtype=float)
    cpl = derive_couplings(p)
    w0 = p.omega0
    xiq = cpl.xi * q / w0
    quad = (p.g / w0) ** 2 * cpl.k0**2 * Q**2 * (n + 1) / (delta / w0)
    out = -(n + 1) * xiq + quad - xiq * quad / (delta / w0)
    return out.item() if out.ndim == 0 else out


def _branch_block(p: PhysicalParams, cpl, n: int, Q: float, q: float):
    """Rescaled 2x2 adiabatic block: (diag gap delta, coupling c)."""
    w0 = p.omega0
    gap = (p.omega - cpl.xi * q - p.Omega) / w0
    k = (p.omega - cpl.xi * q) / p.c_light
    c = (p.g / w0) * math.sin(k * Q) * math.sqrt(n + 1)
    return gap, c, k


def born_oppenheimer_ratio(
    p: PhysicalParams,
    n: int,
    Q: float,
    q: float,
    fd_step: float | None = None,
    method: str = "analytic",
) -> float:
    """Nonadiabatic-coupling-over-splitting ratio of the branch pair.

    |(<phi_+|d_Q|phi_-> + <phi_+|d_q|phi_->) / (U_+ - U_-)| evaluated either
    from the analytic mixing angle (``method="analytic"``) or from
    phase-fixed central differences of the 2x2 eigenvectors
    (``method="fd"``).  Units: 1/(m * hbar*omega0).
    """
    if method not in ("analytic", "fd"):
        raise ValueError(f"method must be 'analytic' or 'fd', got {method!r}")
    cpl = derive_couplings(p)
    gap, c, k = _branch_block(p, cpl, n, Q, q)
    splitting = 2.0 * math.hypot(0.5 * gap, c)
    if splitting <= 1e-12:
        raise DegeneracyError(
            f"adiabatic branches degenerate at (Q={Q!r}, q={q!r}): splitting {splitting!r}"
        )
    if method == "analytic":
        denom = gap**2 + 4.0 * c**2
        root = math.sqrt(n + 1)
        # d(theta)/dQ: only the coupling depends on Q.
        dc_dQ = (p.g / p.omega0) * k * math.cos(k * Q) * root
        dtheta_dQ = 2.0 * dc_dQ * gap / denom
        # d(theta)/dq: both the gap and (through k) the coupling move.
        dc_dq = -(p.g / p.omega0) * (cpl.xi / p.c_light) * Q * math.cos(k * Q) * root
        dgap_dq = -cpl.xi / p.omega0
        dtheta_dq = (2.0 * dc_dq * gap - 2.0 * c * dgap_dq) / denom
        return abs(-0.5 * (dtheta_dQ + dtheta_dq)) / splitting

    step = 1e-6 if fd_step is None else float(fd_step)
    h_q_char = 1e-3 * p.L
    v_plus0, v_minus0 = _branch_vectors(p, cpl, n, Q, q)
    total = 0.0
    for axis, h in (("Q", step * (abs(Q) + 1.0 / cpl.k0)), ("q", step * (abs(q) + h_q_char))):
        if axis == "Q":
            _, vm_hi = _branch_vectors(p, cpl, n, Q + h, q)
            _, vm_lo = _branch_vectors(p, cpl, n, Q - h, q)
        else:
            _, vm_hi = _branch_vectors(p, cpl, n, Q, q + h)
            _, vm_lo = _branch_vectors(p, cpl, n, Q, q - h)
        vm_hi = vm_hi if vm_hi @ v_minus0 >= 0 else -vm_hi
        vm_lo = vm_lo if vm_lo @ v_minus0 >= 0 else -vm_lo
        total += v_plus0 @ ((vm_hi - vm_lo) / (2.0 * h))
    return abs(total) / splitting


def _branch_vectors(p, cpl, n, Q, q):
    gap, c, _ = _branch_block(p, cpl, n, Q, q)
    block = np.array([[0.5 * gap, c], [c, -0.5 * gap]])
    _, vecs = np.linalg.eigh(block)
    return vecs[:, 1], vecs[:, 0]  # plus branch, minus branch


def mirror_adiabaticity_ratio(
    psi: QuantumState, n_m: int, m_m: int, p: PhysicalParams
) -> float:
    """Fock-transition ratio for the mirror during node-regime dynamics.

    |<psi|(g_pi*(a^dag sigma^- + h.c.) + xi*a^dag a)|psi>| * |<n_m|q|m_m>|
    / omega_m.  The displacement q only couples adjacent Fock states, so
    any |n_m - m_m| >= 2 returns exactly zero.
    """
    if n_m < 0 or m_m < 0:
        raise ValueError("phonon indices must be >= 0")
    if n_m == m_m:
        raise ValueError("phonon indices must differ (transition denominator is zero)")
    if abs(n_m - m_m) != 1:
        return 0.0
    facs = psi.dims.factors
    if len(facs) != 2 or facs[0] != 2:
        raise ValueError("state must live on the atom (dim 2) x photon space")
    cpl = derive_couplings(p)
    _, n_op, _, _, x_op = _atom_photon_pieces(facs[1])
    op = cpl.g_pi * x_op.entries + cpl.xi * n_op.entries
    if psi.kind == "pure":
        expectation = np.vdot(psi.vector, op @ psi.vector)
    else:
        expectation = np.trace(psi.matrix @ op)
    q_elem = math.sqrt(HBAR / (2.0 * p.m * p.omega_m)) * math.sqrt(max(n_m, m_m))
    return abs(complex(expectation)) * q_elem / p.omega_m
