"""Hot per-timestep kernels with a compiled core and a numpy fallback.

Two kernels back :func:`atomcavity.hilbert.partial_trace`:

``pure_reduced(psi2)``
    Reduced density matrix ``psi2 @ psi2.conj().T`` of a pure state
    reshaped to (d_keep, d_rest).

``mixed_reduced(rho, d_keep, d_rest)``
    Partial trace over the trailing factor of a keep-major density matrix:
    ``out[i, j] = sum_a rho[i*d_rest + a, j*d_rest + a]``.

The compiled extension (``_speedups``, Cython) is used where benchmarks
show it ahead: always for the strided ``mixed_reduced`` gather, and for
``pure_reduced`` below a size crossover where BLAS overtakes the loop
(see benchmarks/bench_kernels.py).  Set ``ATOMCAVITY_PURE_PYTHON=1`` to
force the numpy implementation of both.
"""

from __future__ import annotations

import os

from . import _numpy

# Below this element count the compiled Gram kernel beats BLAS.
_PURE_CROSSOVER = 256

if os.environ.get("ATOMCAVITY_PURE_PYTHON"):
    _speedups = None
else:
    try:
        from . import _speedups  # type: ignore[attr-defined]
    except ImportError:
        _speedups = None

if _speedups is None:
    backend = "numpy"
    pure_reduced = _numpy.pure_reduced
    mixed_reduced = _numpy.mixed_reduced
else:
    backend = "cython"
    mixed_reduced = _speedups.mixed_reduced

    def pure_reduced(psi2):
        if psi2.size <= _PURE_CROSSOVER:
            return _speedups.pure_reduced(psi2)
        return _numpy.pure_reduced(psi2)


__all__ = ["pure_reduced", "mixed_reduced", "backend"]
