"""Matrix-free ground-state solver (restarted Lanczos with full reorthogonalization).

Serves as the exact-diagonalization reference: the lowest eigenvalue of a
qubit Hamiltonian within its full 2**n space, no basis truncation beyond
the Krylov iteration itself.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DimensionError
from .pauli import QubitHamiltonian

MAX_QUBITS = 20
KRYLOV_DIM = 60


@dataclass(frozen=True)
class GroundStateResult:
    """Lowest-eigenvalue estimate with its convergence evidence."""

    energy: float
    residual_norm: float
    iterations: int
    converged: bool


def _lanczos_sweep(
    h: QubitHamiltonian, v0: np.ndarray, m: int
) -> tuple[np.ndarray, np.ndarray, list[np.ndarray], int]:
    """One Krylov sweep from v0: tridiagonal coefficients and the basis built."""
    alphas: list[float] = []
    betas: list[float] = []
    basis: list[np.ndarray] = [v0]
    matvecs = 0
    w = h.apply_amplitudes(v0)
    matvecs += 1
    a = float(np.vdot(v0, w).real)
    alphas.append(a)
    w = w - a * v0
    for _ in range(1, m):
        # full reorthogonalization, two passes for numerical safety
        for _pass in range(2):
            for v in basis:
                w -= np.vdot(v, w) * v
        b = float(np.linalg.norm(w))
        if b < 1e-13:
            break  # invariant subspace reached
        w /= b
        basis.append(w)
        betas.append(b)
        w = h.apply_amplitudes(basis[-1])
        matvecs += 1
        a = float(np.vdot(basis[-1], w).real)
        alphas.append(a)
        w = w - a * basis[-1] - b * basis[-2]
    return np.asarray(alphas), np.asarray(betas), basis, matvecs


def ground_state(
    h: QubitHamiltonian, tol: float = 1e-8, max_iter: int = 100, seed: int = 7
) -> GroundStateResult:
    """Lowest eigenvalue of H, matrix-free.

    Restarts Lanczos from the current Ritz vector until the residual
    satisfies ||H x - E x|| <= tol * max(1, |E|) or max_iter restarts have
    run; non-convergence is reported in the result, not raised. iterations
    counts H applications. Deterministic for a fixed seed.
    """
    if h.n_qubits > MAX_QUBITS:
        raise DimensionError(f"ground_state supports at most {MAX_QUBITS} qubits")
    dim = h.dim
    if not h.terms:
        return GroundStateResult(0.0, 0.0, 0, True)
    m = min(KRYLOV_DIM, dim)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    x /= np.linalg.norm(x)

    energy = float("inf")
    residual = float("inf")
    total_matvecs = 0
    for _restart in range(max_iter):
        alphas, betas, basis, matvecs = _lanczos_sweep(h, x, m)
        total_matvecs += matvecs
        if len(alphas) == 1:
            vecs = np.ones((1, 1))
        else:
            _, vecs = eigh_tridiagonal(alphas, betas, select="i", select_range=(0, 0))
        x = np.zeros(dim, dtype=np.complex128)
        for c, v in zip(vecs[:, 0], basis):
            x += c * v
        x /= np.linalg.norm(x)
        hx = h.apply_amplitudes(x)
        total_matvecs += 1
        energy = float(np.vdot(x, hx).real)  # Rayleigh quotient of the Ritz vector
        residual = float(np.linalg.norm(hx - energy * x))
        if residual <= tol * max(1.0, abs(energy)):
            return GroundStateResult(energy, residual, total_matvecs, True)
    return GroundStateResult(energy, residual, total_matvecs, False)
