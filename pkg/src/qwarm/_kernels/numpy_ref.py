"""Reference numpy implementation of the statevector kernels.

Conventions shared by every backend:

* amplitudes are one contiguous complex128 array of length 2**n_qubits;
* qubit q is bit q of the amplitude index (little-endian);
* a Pauli string is (x_mask, z_mask, n_y): bit q of x_mask is set for X/Y on
  qubit q, bit q of z_mask for Z/Y, and n_y counts the Y factors. Its action
  on a basis state is  P|i> = i**n_y * (-1)**popcount(i & z_mask) |i ^ x_mask>.

All kernels mutate their first argument in place unless noted otherwise.
"""
from __future__ import annotations

import math

import numpy as np

_I_POW = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)

if hasattr(np, "bitwise_count"):
    popcount_u64 = np.bitwise_count
else:  # numpy < 2.0: parallel bit-count fold

    def popcount_u64(x: np.ndarray) -> np.ndarray:
        x = x.astype(np.uint64, copy=True)
        x -= (x >> np.uint64(1)) & np.uint64(0x5555555555555555)
        x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
        x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
        return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


def _parity_signs(indices: np.ndarray, z_mask: int) -> np.ndarray:
    """(-1)**popcount(i & z_mask) for each index, as float64."""
    bits = popcount_u64(indices & np.uint64(z_mask))
    return 1.0 - 2.0 * (bits.astype(np.uint64) & np.uint64(1)).astype(np.float64)


def _pair_indices(dim: int, x_mask: int) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs (i, i ^ x_mask) with the pivot bit of x_mask clear in i."""
    pivot = x_mask & -x_mask
    b = pivot.bit_length() - 1
    half = np.arange(dim >> 1, dtype=np.uint64)
    low = half & np.uint64(pivot - 1)
    idx0 = ((half >> np.uint64(b)) << np.uint64(b + 1)) | low
    return idx0, idx0 ^ np.uint64(x_mask)


def apply_pauli_rotation(amps: np.ndarray, x_mask: int, z_mask: int, n_y: int, angle: float) -> None:
    """In place: amps <- exp(-i * angle/2 * P) @ amps."""
    dim = amps.shape[0]
    c = math.cos(0.5 * angle)
    s = math.sin(0.5 * angle)
    if x_mask == 0:
        signs = _parity_signs(np.arange(dim, dtype=np.uint64), z_mask)
        amps *= c - 1j * s * signs
        return
    idx0, idx1 = _pair_indices(dim, x_mask)
    ph = _I_POW[n_y & 3]
    p0 = ph * _parity_signs(idx0, z_mask)  # phase of P|idx0> -> |idx1>
    a0 = amps[idx0]
    a1 = amps[idx1]
    amps[idx0] = c * a0 - 1j * s * np.conj(p0) * a1
    amps[idx1] = c * a1 - 1j * s * p0 * a0


def apply_pauli(out: np.ndarray, amps: np.ndarray, x_mask: int, z_mask: int, n_y: int) -> None:
    """out <- P @ amps (out is overwritten; out and amps must not alias)."""
    dim = amps.shape[0]
    indices = np.arange(dim, dtype=np.uint64)
    t = amps * (_I_POW[n_y & 3] * _parity_signs(indices, z_mask))
    if x_mask == 0:
        out[:] = t
    else:
        out[:] = t[indices ^ np.uint64(x_mask)]


def accumulate_permuted(out: np.ndarray, weighted: np.ndarray, x_mask: int) -> None:
    """out[i ^ x_mask] += weighted[i] for all i (in place on out)."""
    if x_mask == 0:
        out += weighted
    else:
        indices = np.arange(out.shape[0], dtype=np.uint64)
        out += weighted[indices ^ np.uint64(x_mask)]


def accumulate_weighted_permuted(
    out: np.ndarray, weights: np.ndarray, amps: np.ndarray, x_mask: int
) -> None:
    """out[i ^ x_mask] += weights[i] * amps[i]."""
    accumulate_permuted(out, weights * amps, x_mask)


def apply_cnot(amps: np.ndarray, control: int, target: int) -> None:
    """In place CNOT: flip target amplitude pairs where the control bit is set."""
    dim = amps.shape[0]
    indices = np.arange(dim, dtype=np.uint64)
    sel = (indices >> np.uint64(control)) & np.uint64(1) == 1
    src = indices[sel] ^ np.uint64(1 << target)
    amps[sel] = amps[src]


def apply_x(amps: np.ndarray, qubit: int) -> None:
    """In place Pauli-X on one qubit (amplitude permutation)."""
    indices = np.arange(amps.shape[0], dtype=np.uint64)
    amps[:] = amps[indices ^ np.uint64(1 << qubit)]
