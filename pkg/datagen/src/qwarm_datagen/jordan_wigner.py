"""Second quantization and the Jordan-Wigner mapping.

Spin orbitals interleave spin: spin orbital 2p is (spatial p, alpha),
2p+1 is (spatial p, beta); qubit q carries spin orbital q (little-endian
amplitude indexing downstream). Operators are held in symplectic form
{(x_mask, z_mask): coeff} with W(x,z) = prod_q X^x_q Z^z_q, multiplied by
W(x1,z1) W(x2,z2) = (-1)^{|z1 & x2|} W(x1^x2, z1^z2); Y = i XZ converts the
final result to conventional Pauli labels.
"""
from __future__ import annotations

import numpy as np

WTerms = dict[tuple[int, int], complex]


def _w_mul(t1: WTerms, t2: WTerms) -> WTerms:
    out: WTerms = {}
    for (x1, z1), c1 in t1.items():
        for (x2, z2), c2 in t2.items():
            sign = -1.0 if bin(z1 & x2).count("1") % 2 else 1.0
            key = (x1 ^ x2, z1 ^ z2)
            out[key] = out.get(key, 0.0) + sign * c1 * c2
    return out


def _w_add(acc: WTerms, terms: WTerms, scale: complex = 1.0) -> None:
    for key, c in terms.items():
        acc[key] = acc.get(key, 0.0) + scale * c


def ladder(p: int, dagger: bool) -> WTerms:
    """a_p or a_p^dagger under Jordan-Wigner, as W-terms."""
    z_chain = (1 << p) - 1  # Z on qubits 0..p-1
    bit = 1 << p
    # sigma-minus = (X - XZ)/2, sigma-plus = (X + XZ)/2, both behind the chain
    return {
        (bit, z_chain): 0.5,
        (bit, z_chain | bit): 0.5 if dagger else -0.5,
    }


def _number_conserving_product(ops: list[tuple[int, bool]]) -> WTerms:
    out: WTerms = {(0, 0): 1.0}
    for p, dag in ops:
        out = _w_mul(out, ladder(p, dag))
    return out


def qubit_hamiltonian(
    h_mo: np.ndarray, eri_mo: np.ndarray, e_nuc: float, drop_tol: float = 1e-12
) -> list[tuple[float, str]]:
    """Jordan-Wigner image of the second-quantized electronic Hamiltonian.

    H = E_nuc + sum_pq h_pq a+_ps a_qs
        + 1/2 sum_pqrs (pq|rs) a+_ps a+_rt a_st a_qs   (chemist integrals)

    Returns merged real-coefficient Pauli terms as (coeff, label) with
    label index 0 = qubit 0 = leftmost character.
    """
    n_spatial = h_mo.shape[0]
    n_so = 2 * n_spatial
    acc: WTerms = {(0, 0): complex(e_nuc)}

    for p in range(n_spatial):
        for q in range(n_spatial):
            if abs(h_mo[p, q]) < drop_tol:
                continue
            for spin in range(2):
                terms = _number_conserving_product(
                    [(2 * p + spin, True), (2 * q + spin, False)]
                )
                _w_add(acc, terms, h_mo[p, q])

    for p in range(n_spatial):
        for q in range(n_spatial):
            for r in range(n_spatial):
                for s in range(n_spatial):
                    coeff = eri_mo[p, q, r, s]
                    if abs(coeff) < drop_tol:
                        continue
                    for s1 in range(2):
                        for s2 in range(2):
                            i, j = 2 * p + s1, 2 * r + s2
                            k, l = 2 * s + s2, 2 * q + s1
                            if i == j or k == l:
                                continue  # a+a+ or aa on one mode vanishes
                            terms = _number_conserving_product(
                                [(i, True), (j, True), (k, False), (l, False)]
                            )
                            _w_add(acc, terms, 0.5 * coeff)

    labels: list[tuple[float, str]] = []
    for (x, z), c in acc.items():
        if abs(c) < drop_tol:
            continue
        n_overlap = bin(x & z).count("1")
        # each XZ factor is -iY, so W = (-i)^{overlap} P and the P coefficient
        # is c * (-i)^{overlap}
        coeff = c * (-1j) ** n_overlap
        if abs(coeff.imag) > 1e-9:
            raise ValueError(f"non-Hermitian term survived the mapping: {coeff}")
        label = "".join(
            "Y" if ((x >> q) & 1 and (z >> q) & 1)
            else "X" if (x >> q) & 1
            else "Z" if (z >> q) & 1
            else "I"
            for q in range(n_so)
        )
        if abs(coeff.real) >= drop_tol:
            labels.append((float(coeff.real), label))
    labels.sort(key=lambda item: item[1])
    return labels
