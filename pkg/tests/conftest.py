import math

import numpy as np
import pytest

from atomcavity.params import PhysicalParams

TWO_PI = 2.0 * math.pi


@pytest.fixture
def node_params() -> PhysicalParams:
    """Coherent-state population figure parameter set (resonant, omega0 = 1e12)."""
    w = TWO_PI * 4.5e6
    return PhysicalParams(
        omega=w, Omega=w, g=w, omega_m=TWO_PI * 2.5e3, m=1e-9, M=1e-26, L=5e-3
    )


@pytest.fixture
def motion_params() -> PhysicalParams:
    """Motion-entanglement figure parameter set (delta = 1e3 rad/s)."""
    w = TWO_PI * 6e13
    return PhysicalParams(
        omega=w, Omega=w - 1e3, g=TWO_PI * 4.5e6, omega_m=TWO_PI * 8e7,
        m=5e-9, M=1e-26, L=1e-4,
    )


@pytest.fixture
def detuned_params() -> PhysicalParams:
    """Large-detuning set (delta = 3g) used for the branch-potential checks."""
    w = TWO_PI * 4.5e6
    g = w / 20.0
    return PhysicalParams(
        omega=w, Omega=w - 3.0 * g, g=g, omega_m=TWO_PI * 2.5e3, m=1e-9, M=1e-26, L=5e-3
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260809)


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return 0.5 * (a + a.conj().T)


def random_state_vector(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)
