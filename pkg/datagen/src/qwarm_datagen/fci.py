"""Exact lowest eigenvalue of a Pauli-term Hamiltonian (ARPACK).

Independent of the consumer package's own eigensolver: the matrix-vector
product is reimplemented here from the Pauli masks and handed to
scipy.sparse.linalg.eigsh, so the embedded fci_energy_ha and the consumer's
strict-mode cross-check come from genuinely different solvers.
"""
from __future__ import annotations

import numpy as np
from scipy.sparse.linalg import LinearOperator, eigsh

if hasattr(np, "bitwise_count"):
    _popcount = np.bitwise_count
else:  # numpy < 2.0

    def _popcount(x):
        x = x.astype(np.uint64, copy=True)
        x -= (x >> np.uint64(1)) & np.uint64(0x5555555555555555)
        x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
        x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
        return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


def _term_masks(coeff: float, label: str) -> tuple[int, int, complex]:
    x = z = 0
    n_y = 0
    for q, ch in enumerate(label):
        if ch in "XY":
            x |= 1 << q
        if ch in "ZY":
            z |= 1 << q
        if ch == "Y":
            n_y += 1
    return x, z, coeff * (1j) ** (n_y & 3)


def lowest_eigenvalue(terms: list[tuple[float, str]], n_qubits: int, tol: float = 0.0) -> float:
    dim = 1 << n_qubits
    indices = np.arange(dim, dtype=np.uint64)
    groups: dict[int, np.ndarray] = {}
    for coeff, label in terms:
        x, z, phase = _term_masks(coeff, label)
        parity = _popcount(indices & np.uint64(z)).astype(np.uint64) & np.uint64(1)
        signs = 1.0 - 2.0 * parity.astype(np.float64)
        w = phase * signs
        if x in groups:
            groups[x] += w
        else:
            groups[x] = w
    perms = {x: indices ^ np.uint64(x) for x in groups}

    def matvec(v: np.ndarray) -> np.ndarray:
        v = v.astype(np.complex128, copy=False)
        out = np.zeros(dim, dtype=np.complex128)
        for x, w in groups.items():
            t = w * v
            if x == 0:
                out += t
            else:
                out += t[perms[x]]
        return out

    if dim <= 64:
        dense = np.zeros((dim, dim), dtype=np.complex128)
        eye = np.eye(dim, dtype=np.complex128)
        for col in range(dim):
            dense[:, col] = matvec(eye[:, col])
        return float(np.linalg.eigvalsh(dense)[0])
    rng = np.random.default_rng(11)
    v0 = rng.standard_normal(dim)
    vals = eigsh(
        LinearOperator((dim, dim), matvec=matvec, dtype=np.complex128),
        k=1,
        which="SA",
        v0=v0,
        tol=tol,
    )[0]
    return float(vals[0])
