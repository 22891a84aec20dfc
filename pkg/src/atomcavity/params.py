"""Physical parameters, derived coupling constants, and decay shifts.

Parameters are stored in SI (angular frequencies in rad/s, lengths in m,
masses in kg).  Hamiltonian builders divide energies by hbar*omega0, the
reference rescaling; derived couplings are reported in SI.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import scipy.constants

from .errors import ConfigError

__all__ = [
    "HBAR",
    "PhysicalParams",
    "DerivedCouplings",
    "DecayShifts",
    "derive_couplings",
    "apply_decay",
]

HBAR = scipy.constants.hbar


@dataclass(frozen=True)
class PhysicalParams:
    """All inputs of the cavity-atom-mirror model.

    omega      cavity angular frequency
    Omega      atomic transition (Rabi) frequency
    g          atom-field coupling
    omega_m    mirror vibration frequency
    m, M       mirror and atom masses
    L          cavity length
    Gamma      atomic spontaneous emission rate (>= 0)
    kappa      cavity decay rate (>= 0)
    omega0     reference rescaling frequency
    """

    omega: float
    Omega: float
    g: float
    omega_m: float
    m: float
    M: float
    L: float
    c_light: float = scipy.constants.c
    Gamma: float = 0.0
    kappa: float = 0.0
    omega0: float = 1e12

    def __post_init__(self):
        for name in ("omega", "Omega", "omega_m", "m", "M", "L", "c_light", "omega0"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"parameter {name} must be > 0, got {value!r}")
        # g = 0 is admitted: the decoupled limit is a documented edge case
        # of the builders and diagnostics.
        for name in ("g", "Gamma", "kappa"):
            if getattr(self, name) < 0:
                raise ValueError(f"parameter {name} must be >= 0")

    @property
    def delta(self) -> float:
        """Detuning omega - Omega, always recomputed."""
        return self.omega - self.Omega

    def with_overrides(self, **kwargs) -> "PhysicalParams":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class DerivedCouplings:
    """Coupling constants derived from :class:`PhysicalParams` (SI units).

    xi            field-frequency pull per mirror displacement, omega/L
    k0            bare wavenumber omega/c
    g_pi          linearized node coupling, g*pi/L
    g_pi_half     quadratic antinode coupling, pi^2*g/(8L)
    chi           Kerr/number-shift scale, hbar*xi^2/(2 m omega_m^2)
    omega_prime   effective atom-motion frequency (None unless delta > 0)
    G_derived     motion-motion coupling from the closed formula (None unless
                  delta > 0); ``omega_choice`` records which frequency sits
                  inside the radical
    """

    xi: float
    k0: float
    g_pi: float
    g_pi_half: float
    chi: float
    omega_prime: float | None
    G_derived: float | None
    omega_choice: str


def derive_couplings(
    p: PhysicalParams,
    omega_choice: str = "omega",
    require_motion: bool = False,
) -> DerivedCouplings:
    """Evaluate all derived couplings from SI parameters.

    ``omega_choice`` selects the frequency inside the radical of the
    motion-motion coupling formula ("omega" or "omega_m").  With
    ``require_motion`` the detuning must be positive so omega_prime and
    G_derived exist.
    """
    if omega_choice not in ("omega", "omega_m"):
        raise ConfigError("omega_choice", f"must be 'omega' or 'omega_m', got {omega_choice!r}")
    xi = p.omega / p.L
    k0 = p.omega / p.c_light
    g_pi = p.g * scipy.constants.pi / p.L
    g_pi_half = scipy.constants.pi**2 * p.g / (8.0 * p.L)
    chi = HBAR * xi**2 / (2.0 * p.m * p.omega_m**2)
    delta = p.delta
    omega_prime = G_derived = None
    if delta > 0:
        omega_prime = p.g * k0 * (2.0 * HBAR / (p.M * delta)) ** 0.5
        w = p.omega if omega_choice == "omega" else p.omega_m
        G_derived = HBAR * xi * p.g * k0 / (4.0 * (p.m * p.M * w * delta**3) ** 0.5)
    elif require_motion:
        raise ConfigError(
            "params", f"detuning omega - Omega = {delta!r} must be > 0 for motion couplings"
        )
    return DerivedCouplings(xi, k0, g_pi, g_pi_half, chi, omega_prime, G_derived, omega_choice)


@dataclass(frozen=True)
class DecayShifts:
    """Complexified frequencies Omega - i*Gamma/2 and omega - i*kappa.

    The imaginary magnitudes are Gamma/2 and kappa; the sign is chosen so
    the non-Hermitian Hamiltonian damps rather than amplifies.  Builders
    place the atomic shift on the excited-state projector (not sigma_z/2),
    which keeps the anti-Hermitian part negative semidefinite, so the norm
    of any state is non-increasing under exp(-iHt).
    """

    Omega_c: complex
    omega_c: complex

    @property
    def gamma(self) -> float:
        return -2.0 * self.Omega_c.imag

    @property
    def kappa(self) -> float:
        return -self.omega_c.imag


def apply_decay(p: PhysicalParams) -> DecayShifts:
    return DecayShifts(
        Omega_c=complex(p.Omega, -0.5 * p.Gamma),
        omega_c=complex(p.omega, -p.kappa),
    )
