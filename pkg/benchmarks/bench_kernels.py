"""Benchmark the compiled reduced-density kernels against the numpy fallback.

Run:  python benchmarks/bench_kernels.py [--repeat 7]

Times the two hot per-timestep kernels (pure-state Gram reduction and
keep-major mixed partial trace) over representative problem sizes, plus an
end-to-end entropy trajectory through each backend.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from atomcavity.kernels import _numpy as np_backend

try:
    from atomcavity.kernels import _speedups as cy_backend
except ImportError:
    cy_backend = None


def best_of(repeat, fn, *args):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(repeat: int):
    rng = np.random.default_rng(7)
    print(f"{'kernel':<14} {'size':<12} {'numpy':>10} {'cython':>10} {'speedup':>9}")
    for dk, dr in ((8, 8), (16, 64), (40, 40), (64, 256), (128, 128)):
        psi = rng.normal(size=(dk, dr)) + 1j * rng.normal(size=(dk, dr))
        psi = np.ascontiguousarray(psi / np.linalg.norm(psi))
        t_np = best_of(repeat, np_backend.pure_reduced, psi)
        row = f"{'pure_reduced':<14} {f'{dk}x{dr}':<12} {t_np * 1e6:>8.1f}us"
        if cy_backend is not None:
            t_cy = best_of(repeat, cy_backend.pure_reduced, psi)
            row += f" {t_cy * 1e6:>8.1f}us {t_np / t_cy:>8.2f}x"
        print(row)
    for dk, dr in ((8, 8), (16, 16), (24, 24), (32, 32)):
        n = dk * dr
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        rho = np.ascontiguousarray(a @ a.conj().T / n)
        t_np = best_of(repeat, np_backend.mixed_reduced, rho, dk, dr)
        row = f"{'mixed_reduced':<14} {f'{dk}x{dr}':<12} {t_np * 1e6:>8.1f}us"
        if cy_backend is not None:
            t_cy = best_of(repeat, cy_backend.mixed_reduced, rho, dk, dr)
            row += f" {t_cy * 1e6:>8.1f}us {t_np / t_cy:>8.2f}x"
        print(row)


def bench_trajectory(repeat: int):
    """End-to-end resonant entanglement run through each backend."""
    import atomcavity.kernels as kernels
    from atomcavity.dynamics import TimeGrid, entropy_trajectory
    from atomcavity.hamiltonians import motion_hamiltonian
    from atomcavity.params import PhysicalParams, derive_couplings
    from atomcavity.states import ModeSpec, fock_state, product_state

    p = PhysicalParams(
        omega=2 * np.pi * 6e13, Omega=2 * np.pi * 6e13 - 1e3, g=2 * np.pi * 4.5e6,
        omega_m=2 * np.pi * 8e7, m=5e-9, M=1e-26, L=1e-4,
    )
    p = p.with_overrides(omega_m=2 * derive_couplings(p, require_motion=True).omega_prime)
    d = 16
    h = motion_hamiltonian(p, d, d, G_override=5e3, rwa=True)
    psi0 = product_state(
        [fock_state(1, ModeSpec("mirror_mode", d)), fock_state(1, ModeSpec("atom_com", d))]
    )
    grid = TimeGrid(0.0, 5e8, 400)

    backends = [("numpy", np_backend)]
    if cy_backend is not None:
        backends.append(("cython", cy_backend))
    print(f"\n{'entropy trajectory':<26} {'(dims 16x16, 400 steps)':<26}")
    for name, impl in backends:
        kernels.pure_reduced = impl.pure_reduced
        kernels.mixed_reduced = impl.mixed_reduced
        t = best_of(repeat, entropy_trajectory, h, psi0, grid, 0)
        print(f"  backend={name:<8} {t * 1e3:>10.1f} ms")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=7)
    args = ap.parse_args()
    if cy_backend is None:
        print("compiled kernels unavailable; timing the numpy fallback only\n")
    bench_kernels(args.repeat)
    bench_trajectory(max(args.repeat // 2, 1))


if __name__ == "__main__":
    main()
