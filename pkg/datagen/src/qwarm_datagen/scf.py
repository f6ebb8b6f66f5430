"""Restricted Hartree-Fock with DIIS acceleration."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from .basis import Molecule
from .integrals import eri_tensor, kinetic_matrix, nuclear_matrix, overlap_matrix


class ScfError(RuntimeError):
    pass


@dataclass
class ScfResult:
    energy: float  # total (electronic + nuclear), Hartree
    mo_coefficients: np.ndarray  # (n_ao, n_mo)
    mo_energies: np.ndarray
    h_core: np.ndarray
    overlap: np.ndarray
    eri: np.ndarray  # AO basis, chemist (ij|kl)
    nuclear_repulsion: float
    iterations: int


def _fock(h_core: np.ndarray, eri: np.ndarray, density: np.ndarray) -> np.ndarray:
    j = np.einsum("pqrs,rs->pq", eri, density)
    k = np.einsum("prqs,rs->pq", eri, density)
    return h_core + j - 0.5 * k


def run_rhf(
    molecule: Molecule, max_iter: int = 200, conv: float = 1e-10, diis_depth: int = 8
) -> ScfResult:
    if molecule.n_electrons % 2:
        raise ScfError("restricted HF needs an even electron count")
    n_occ = molecule.n_electrons // 2
    basis = molecule.basis_functions()
    s = overlap_matrix(basis)
    h = kinetic_matrix(basis) + nuclear_matrix(basis, molecule)
    eri = eri_tensor(basis)
    e_nuc = molecule.nuclear_repulsion()

    energy = 0.0
    evals, evecs = eigh(h, s)
    c_occ = evecs[:, :n_occ]
    density = 2.0 * c_occ @ c_occ.T

    fock_history: list[np.ndarray] = []
    error_history: list[np.ndarray] = []
    for iteration in range(1, max_iter + 1):
        f = _fock(h, eri, density)
        # DIIS error in the orthonormal sense: FDS - SDF
        err = f @ density @ s - s @ density @ f
        fock_history.append(f)
        error_history.append(err)
        if len(fock_history) > diis_depth:
            fock_history.pop(0)
            error_history.pop(0)
        if len(fock_history) > 1:
            k = len(fock_history)
            b = -np.ones((k + 1, k + 1))
            b[k, k] = 0.0
            for a in range(k):
                for c in range(k):
                    b[a, c] = np.sum(error_history[a] * error_history[c])
            rhs = np.zeros(k + 1)
            rhs[k] = -1.0
            try:
                weights = np.linalg.solve(b, rhs)[:k]
                f = sum(w * fm for w, fm in zip(weights, fock_history))
            except np.linalg.LinAlgError:
                pass
        evals, evecs = eigh(f, s)
        c_occ = evecs[:, :n_occ]
        density = 2.0 * c_occ @ c_occ.T
        electronic = 0.5 * np.sum(density * (h + _fock(h, eri, density)))
        new_energy = float(electronic + e_nuc)
        de = abs(new_energy - energy)
        energy = new_energy
        if de < conv and float(np.max(np.abs(err))) < 1e-8:
            return ScfResult(
                energy=energy,
                mo_coefficients=evecs,
                mo_energies=evals,
                h_core=h,
                overlap=s,
                eri=eri,
                nuclear_repulsion=e_nuc,
                iterations=iteration,
            )
    raise ScfError(f"SCF failed to converge in {max_iter} iterations (last dE={de:.2e})")


def mo_integrals(result: ScfResult) -> tuple[np.ndarray, np.ndarray]:
    """Spatial MO-basis core Hamiltonian and (pq|rs) chemist ERIs."""
    c = result.mo_coefficients
    h_mo = c.T @ result.h_core @ c
    eri_mo = np.einsum("pqrs,pi,qj,rk,sl->ijkl", result.eri, c, c, c, c, optimize=True)
    return h_mo, eri_mo
