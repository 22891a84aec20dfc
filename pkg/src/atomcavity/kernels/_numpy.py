"""Pure-numpy kernel implementations (fallback backend)."""

from __future__ import annotations

import numpy as np


def pure_reduced(psi2: np.ndarray) -> np.ndarray:
    return psi2 @ psi2.conj().T


def mixed_reduced(rho: np.ndarray, d_keep: int, d_rest: int) -> np.ndarray:
    r4 = rho.reshape(d_keep, d_rest, d_keep, d_rest)
    return np.einsum("iaja->ij", r4)
