"""VQE on an exact statevector simulator, with learned warm starts.

Library layout:

* pauli / eigensolver — Pauli-string Hamiltonians, matrix-free application,
  Lanczos ground-state reference
* statevector / ansatz — simulator kernels and circuit builders (UCCSD,
  hardware-efficient, strongly entangling)
* gradients — adjoint differentiation plus parameter-shift and
  finite-difference oracles
* vqe — SGD/Adam optimization loop with initialization strategies
* lstm / meta — the recurrent warm-start model: shared LSTM core,
  per-molecule projection heads, trajectory-weighted training
* dataset — molecule fixture loading and validation
* cli — batch experiment front end (`qwarm --help`)
"""
from __future__ import annotations

from ._kernels import backend_name

__version__ = "0.1.0"

__all__ = ["backend_name", "__version__"]
