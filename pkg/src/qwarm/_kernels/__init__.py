"""Statevector hot kernels with a compiled core and a pure-numpy fallback.

The compiled extension (``qwarm._kernels._core``) is preferred when it
imported successfully at install time; otherwise the numpy reference
implementation is used. ``QWARM_KERNELS=numpy|cython`` forces a backend
(``cython`` raises if the extension is unavailable).

Both backends implement the same contract, documented in ``numpy_ref``:
in-place gate kernels and accumulate-style Pauli application on complex128
amplitude arrays, little-endian qubit indexing.
"""
from __future__ import annotations

import os

from . import numpy_ref

_requested = os.environ.get("QWARM_KERNELS", "auto").lower()

if _requested == "numpy":
    impl = numpy_ref
    BACKEND = "numpy"
elif _requested in ("auto", "cython"):
    try:
        from . import _core as impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        impl = numpy_ref
        BACKEND = "numpy"
else:
    raise ValueError(f"QWARM_KERNELS must be auto, numpy or cython, got {_requested!r}")

apply_pauli_rotation = impl.apply_pauli_rotation
apply_pauli = impl.apply_pauli
accumulate_permuted = impl.accumulate_permuted
accumulate_weighted_permuted = impl.accumulate_weighted_permuted
apply_cnot = impl.apply_cnot
apply_x = impl.apply_x


def backend_name() -> str:
    """Name of the kernel backend selected at import ('cython' or 'numpy')."""
    return BACKEND
