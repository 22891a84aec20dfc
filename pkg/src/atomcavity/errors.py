"""Exception hierarchy shared across the simulator.

Each error class carries the process exit code the CLI maps it to.
"""

from __future__ import annotations


class SimulationError(Exception):
    """Base class for all simulator errors."""

    exit_code = 1


class ConfigError(SimulationError):
    """Invalid or inconsistent configuration input."""

    exit_code = 2

    def __init__(self, field: str, message: str):
        super().__init__(f"config field '{field}': {message}")
        self.field = field


class CapacityError(SimulationError):
    """Composite Hilbert-space dimension exceeds the configured cap."""

    exit_code = 3


class NumericalGuardError(SimulationError):
    """A runtime numerical sanity check tripped (norm jump, degeneracy, ...)."""

    exit_code = 4


class DegeneracyError(NumericalGuardError):
    """Adiabatic-branch splitting below tolerance at a requested point."""


class TruncationError(ConfigError):
    """A mode truncation is too small for the requested state tolerance."""
