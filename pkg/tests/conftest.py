"""Shared fixtures: molecule records, toy Hamiltonians, dense-matrix oracles."""
from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from qwarm.dataset import load_fixtures_dir

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES_DIR = REPO_ROOT / "fixtures"

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense_pauli_string(ops: str) -> np.ndarray:
    """Dense matrix of a Pauli string via Kronecker products (test oracle).

    Little-endian: qubit 0 is the least significant bit, so its factor is
    the rightmost in the kron chain.
    """
    out = np.array([[1.0 + 0.0j]])
    for ch in ops:  # ops[0] = qubit 0 -> applied as the innermost factor
        out = np.kron(PAULI_MATRICES[ch], out)
    return out


def dense_hamiltonian(h) -> np.ndarray:
    """Dense matrix of a QubitHamiltonian (independent of the mask kernels)."""
    dim = 1 << h.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, string in h.terms:
        out += coeff * dense_pauli_string(string.ops)
    return out


@pytest.fixture(scope="session")
def manifest():
    return load_fixtures_dir(FIXTURES_DIR)


@pytest.fixture(scope="session")
def h2(manifest):
    return manifest.resolve("H2")


@pytest.fixture(scope="session")
def h4(manifest):
    return manifest.resolve("H4")


@pytest.fixture(scope="session")
def h2o(manifest):
    return manifest.resolve("H2O")
