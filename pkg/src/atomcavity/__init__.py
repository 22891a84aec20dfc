"""Simulator for a two-level atom in a cavity with a vibrating end mirror."""

__version__ = "0.1.0"

from .hilbert import (  # noqa: E402,F401
    OperatorMatrix,
    QuantumState,
    SpaceDims,
    eig_hermitian,
    expm,
    kron,
    partial_trace,
    von_neumann_entropy,
)
from .params import PhysicalParams, apply_decay, derive_couplings  # noqa: F401
from .states import (  # noqa: F401
    ModeSpec,
    annihilation,
    coherent_state,
    creation,
    embed,
    pauli,
    product_state,
    thermal_state,
)
from .hamiltonians import (  # noqa: F401
    DressedPair,
    build_antinode_hamiltonian,
    build_node_hamiltonian,
    dressed_pair,
    motion_hamiltonian,
)
from .dynamics import TimeGrid, Trajectory, entropy_trajectory, evolve  # noqa: F401
