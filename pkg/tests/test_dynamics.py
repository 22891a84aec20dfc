import math

import numpy as np
import pytest

from atomcavity.dynamics import (
    TimeGrid,
    Trajectory,
    entropy_trajectory,
    evolve,
    excited_population,
    leakage,
)
from atomcavity.errors import NumericalGuardError
from atomcavity.hamiltonians import motion_hamiltonian
from atomcavity.hilbert import (
    OperatorMatrix,
    QuantumState,
    SpaceDims,
    partial_trace,
    von_neumann_entropy,
)
from atomcavity.params import derive_couplings
from atomcavity.states import ModeSpec, atom_state, fock_state, product_state, thermal_state


def two_level(e1, e2, v, hermitian=True):
    return OperatorMatrix(SpaceDims((2,)), np.array([[e1, v], [v, e2]], dtype=complex), hermitian)


def rabi_population(e1, e2, v, t):
    """Closed-form two-level survival probability of the second basis state."""
    w = math.hypot(e1 - e2, 2 * v)
    if w == 0.0:
        return np.ones_like(t)
    return 1.0 - (4 * v**2 / w**2) * np.sin(0.5 * w * np.asarray(t)) ** 2


# -- grids and trajectories -----------------------------------------------------


def test_time_grid_validation():
    with pytest.raises(ValueError):
        TimeGrid(0.0, 0.0, 10)
    with pytest.raises(ValueError):
        TimeGrid(0.0, 1.0, 1)
    g = TimeGrid(0.0, 2.0, 5)
    np.testing.assert_allclose(g.times, [0, 0.5, 1.0, 1.5, 2.0])
    assert g.dt == 0.5


def test_trajectory_validates_columns():
    g = TimeGrid(0.0, 1.0, 3)
    with pytest.raises(ValueError):
        Trajectory(g, {"population": np.zeros(2)})
    with pytest.raises(ValueError):
        Trajectory(g, {"norm": np.array([1.0, 1.5, 1.0])})


# -- evolve: Hermitian spectral path ----------------------------------------------


def test_eigenvector_is_stationary():
    h = OperatorMatrix(SpaceDims((3,)), np.diag([0.1, 0.5, 0.9]).astype(complex), True)
    psi0 = QuantumState.pure(SpaceDims((3,)), [0, 1, 0])
    for s in evolve(h, psi0, TimeGrid(0.0, 100.0, 7)):
        assert abs(np.vdot(psi0.vector, s.vector)) == pytest.approx(1.0, abs=1e-12)


def test_two_level_rabi_closed_form():
    e1, e2, v = 0.35, -0.15, 0.08
    h = two_level(e1, e2, v)
    psi0 = atom_state("g")  # second basis state
    grid = TimeGrid(0.0, 120.0, 600)
    pops = [1.0 - excited_population(s) for s in evolve(h, psi0, grid)]
    expected = rabi_population(e2, e1, v, grid.times)
    np.testing.assert_allclose(pops, expected, atol=1e-8)


def test_norm_and_energy_conserved(rng):
    from conftest import random_hermitian, random_state_vector

    d = 12
    hm = random_hermitian(rng, d)
    h = OperatorMatrix(SpaceDims((d,)), hm, True)
    psi0 = QuantumState.pure(SpaceDims((d,)), random_state_vector(rng, d))
    e0 = np.vdot(psi0.vector, hm @ psi0.vector).real
    for s in evolve(h, psi0, TimeGrid(0.0, 30.0, 50)):
        assert abs(s.norm() - 1.0) <= 1e-9
        e_t = np.vdot(s.vector, hm @ s.vector).real
        assert abs(e_t - e0) <= 1e-8 * abs(e0)


def test_semigroup_property(rng):
    from conftest import random_hermitian, random_state_vector

    d = 6
    h = OperatorMatrix(SpaceDims((d,)), random_hermitian(rng, d), True)
    psi0 = QuantumState.pure(SpaceDims((d,)), random_state_vector(rng, d))
    t1, t2 = 3.0, 7.5
    mid = evolve(h, psi0, TimeGrid(0.0, t1, 2))[-1]
    via_mid = evolve(h, mid, TimeGrid(0.0, t2 - t1, 2))[-1]
    direct = evolve(h, psi0, TimeGrid(0.0, t2, 2))[-1]
    # Snapshots agree up to a global phase.
    assert abs(np.vdot(via_mid.vector, direct.vector)) == pytest.approx(1.0, abs=1e-8)


def test_mixed_evolution_preserves_trace_and_spectrum(rng):
    from conftest import random_hermitian

    h = OperatorMatrix(SpaceDims((4,)), random_hermitian(rng, 4), True)
    rho0 = np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex)
    s0 = QuantumState.mixed(SpaceDims((4,)), rho0)
    final = evolve(h, s0, TimeGrid(0.0, 20.0, 5))[-1]
    assert final.kind == "mixed"
    assert np.trace(final.matrix).real == pytest.approx(1.0, abs=1e-10)
    np.testing.assert_allclose(
        np.linalg.eigvalsh(final.matrix), [0.1, 0.2, 0.3, 0.4], atol=1e-10
    )


def test_dimension_mismatch_rejected():
    h = two_level(0.0, 0.0, 0.1)
    psi0 = fock_state(0, ModeSpec("photon", 3))
    with pytest.raises(ValueError):
        evolve(h, psi0, TimeGrid(0.0, 1.0, 2))


# -- evolve: non-Hermitian stepping path ---------------------------------------------


def test_stepping_matches_spectral_for_hermitian_entries():
    e1, e2, v = 0.2, -0.3, 0.11
    herm = two_level(e1, e2, v, hermitian=True)
    # Same entries, forced onto the stepping path.
    stepped = two_level(e1, e2, v, hermitian=False)
    psi0 = atom_state("e")
    grid = TimeGrid(0.0, 40.0, 250)
    p_spec = [excited_population(s) for s in evolve(herm, psi0, grid)]
    p_step = [excited_population(s) for s in evolve(stepped, psi0, grid)]
    np.testing.assert_allclose(p_step, p_spec, atol=1e-9)


def test_nonhermitian_norm_monotone():
    h = OperatorMatrix(
        SpaceDims((2,)), np.array([[0.3 - 0.05j, 0.1], [0.1, -0.2 - 0.02j]]), False
    )
    psi0 = atom_state("e")
    norms = [s.norm() for s in evolve(h, psi0, TimeGrid(0.0, 50.0, 200))]
    assert all(b <= a * (1 + 1e-12) for a, b in zip(norms, norms[1:]))
    assert norms[-1] < norms[0]


def test_norm_jump_guard_trips_on_gain():
    h = OperatorMatrix(SpaceDims((2,)), np.array([[0.5j, 0], [0, 0]]), False)
    psi0 = atom_state("e")
    with pytest.raises(NumericalGuardError):
        evolve(h, psi0, TimeGrid(0.0, 3.0, 4))


# -- observables ------------------------------------------------------------------


def test_excited_population_product_cases():
    photon = fock_state(0, ModeSpec("photon", 3))
    assert excited_population(product_state([atom_state("e"), photon])) == pytest.approx(1.0)
    assert excited_population(product_state([atom_state("g"), photon])) == pytest.approx(0.0)
    plus = QuantumState.pure(SpaceDims((2,)), np.array([1, 1]) / math.sqrt(2))
    s = product_state([plus, photon])
    assert excited_population(s) == pytest.approx(0.5, abs=1e-12)


def test_leakage_trivial_cases():
    vac = product_state(
        [fock_state(0, ModeSpec("photon", 5)), fock_state(0, ModeSpec("mirror_phonon", 4))]
    )
    assert leakage(vac, 1) == 0.0
    edge = fock_state(4, ModeSpec("photon", 5))
    assert leakage(edge, 1) == pytest.approx(1.0)


def test_leakage_counts_any_mode_near_edge():
    s = product_state(
        [fock_state(0, ModeSpec("photon", 5)), fock_state(3, ModeSpec("mirror_phonon", 4))]
    )
    assert leakage(s, 1) == pytest.approx(1.0)
    assert leakage(s, 0) == 0.0


def test_schmidt_symmetry(rng):
    from conftest import random_state_vector

    s = QuantumState.pure(SpaceDims((3, 5)), random_state_vector(rng, 15))
    sa = von_neumann_entropy(partial_trace(s, 0))
    sb = von_neumann_entropy(partial_trace(s, 1))
    assert sa == pytest.approx(sb, abs=1e-9)


# -- entropy trajectories -----------------------------------------------------------


def test_entropy_stays_zero_without_coupling(motion_params):
    h = motion_hamiltonian(motion_params, 4, 4, G_override=0.0)
    psi0 = product_state(
        [fock_state(1, ModeSpec("mirror_mode", 4)), fock_state(1, ModeSpec("atom_com", 4))]
    )
    traj = entropy_trajectory(h, psi0, TimeGrid(0.0, 1e7, 40), keep=0)
    np.testing.assert_allclose(traj.columns["entropy"], 0.0, atol=1e-9)


def resonant_motion_params(motion_params):
    cpl = derive_couplings(motion_params, require_motion=True)
    return motion_params.with_overrides(omega_m=2.0 * cpl.omega_prime)


def test_rwa_entropy_binary_closed_form(motion_params):
    # Degenerate two-state dynamics: S(t) = h2(sin^2(sqrt(6) G t)).
    p = resonant_motion_params(motion_params)
    G = 5e3
    g_resc = G / p.omega0
    d_c, d_b = 4, 6
    h = motion_hamiltonian(p, d_c, d_b, G_override=G, rwa=True)
    psi0 = product_state(
        [fock_state(1, ModeSpec("mirror_mode", d_c)), fock_state(1, ModeSpec("atom_com", d_b))]
    )
    period = math.pi / (2 * math.sqrt(6.0) * g_resc)
    grid = TimeGrid(0.0, 4 * period, 161)
    traj = entropy_trajectory(h, psi0, grid, keep=0)

    s2 = np.sin(math.sqrt(6.0) * g_resc * grid.times) ** 2
    expected = np.zeros_like(s2)
    for arm in (s2, 1.0 - s2):
        mask = arm > 1e-300
        expected[mask] -= arm[mask] * np.log(arm[mask])
    np.testing.assert_allclose(traj.columns["entropy"], expected, atol=1e-6)

    # Population never leaves span{|1,1>, |0,3>}.
    snaps = evolve(h, psi0, grid)
    inside = [1 * d_b + 1, 0 * d_b + 3]
    for s in snaps:
        probs = np.abs(s.vector) ** 2
        assert probs.sum() - probs[inside].sum() < 1e-10


def test_full_motion_entropy_converges_under_truncation(motion_params):
    G = 5e3
    grid = TimeGrid(0.0, 1e-4 * motion_params.omega0, 120)
    curves = {}
    for d in (8, 12):
        h = motion_hamiltonian(motion_params, d, d, G_override=G, rwa=False)
        psi0 = product_state(
            [fock_state(1, ModeSpec("mirror_mode", d)), fock_state(1, ModeSpec("atom_com", d))]
        )
        traj = entropy_trajectory(h, psi0, grid, keep=0)
        curves[d] = traj.columns["entropy"]
        assert traj.metadata["leakage_max"] < 1e-6
    assert np.abs(curves[8] - curves[12]).max() < 1e-4


def test_entropy_trajectory_mixed_initial(motion_params):
    p = resonant_motion_params(motion_params)
    h = motion_hamiltonian(p, 4, 6, G_override=5e3, rwa=True)
    rho_c = thermal_state(1e9, p.omega_m, ModeSpec("mirror_mode", 4))
    psi_b = fock_state(1, ModeSpec("atom_com", 6))
    mixed0 = product_state([rho_c, psi_b])
    traj = entropy_trajectory(h, mixed0, TimeGrid(0.0, 1e7, 25), keep=0)
    assert np.all(np.isfinite(traj.columns["entropy"]))
    np.testing.assert_allclose(traj.columns["norm"], 1.0, atol=1e-9)
