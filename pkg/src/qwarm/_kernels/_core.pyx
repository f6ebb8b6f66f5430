# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled statevector kernels. Same contract as numpy_ref (see its docstring)."""
from libc.math cimport cos, sin

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef unsigned long long u64

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    static inline int qw_parity(unsigned long long x) { return __builtin_parityll(x); }
    #else
    static inline int qw_parity(unsigned long long x) {
        x ^= x >> 32; x ^= x >> 16; x ^= x >> 8; x ^= x >> 4; x ^= x >> 2; x ^= x >> 1;
        return (int)(x & 1ULL);
    }
    #endif
    """
    int qw_parity(u64 x) nogil


cdef inline double complex _i_pow(int n_y) nogil:
    cdef int r = n_y & 3
    if r == 0:
        return 1.0 + 0.0j
    if r == 1:
        return 1.0j
    if r == 2:
        return -1.0 + 0.0j
    return -1.0j


def apply_pauli_rotation(double complex[::1] amps, x_mask, z_mask, n_y, angle):
    """In place: amps <- exp(-i * angle/2 * P) @ amps."""
    cdef u64 xm = <u64> x_mask
    cdef u64 zm = <u64> z_mask
    cdef int ny = <int> n_y
    cdef double half = 0.5 * <double> angle
    cdef double c = cos(half)
    cdef double s = sin(half)
    cdef Py_ssize_t dim = amps.shape[0]
    cdef Py_ssize_t h, n_pairs
    cdef u64 i, i0, i1, pivot, low_mask
    cdef int b
    cdef double sign
    cdef double complex ph, p0, a0, a1, mis = -1.0j * s

    if xm == 0:
        with nogil:
            for i in range(<u64> dim):
                sign = 1.0 - 2.0 * qw_parity(i & zm)
                amps[i] = amps[i] * (c + mis * sign)
        return

    pivot = xm & (~xm + 1)
    b = 0
    while (pivot >> b) != 1:
        b += 1
    low_mask = pivot - 1
    n_pairs = dim >> 1
    ph = _i_pow(ny)
    cdef double complex m_fwd = mis * ph                # applied when parity is even
    cdef double complex m_bwd = mis * ph.conjugate()
    with nogil:
        for h in range(n_pairs):
            i0 = (((<u64> h) >> b) << (b + 1)) | ((<u64> h) & low_mask)
            i1 = i0 ^ xm
            a0 = amps[i0]
            a1 = amps[i1]
            if qw_parity(i0 & zm):
                amps[i0] = c * a0 - m_bwd * a1
                amps[i1] = c * a1 - m_fwd * a0
            else:
                amps[i0] = c * a0 + m_bwd * a1
                amps[i1] = c * a1 + m_fwd * a0


def apply_pauli(double complex[::1] out, double complex[::1] amps, x_mask, z_mask, n_y):
    """out <- P @ amps (out overwritten; must not alias amps)."""
    cdef u64 xm = <u64> x_mask
    cdef u64 zm = <u64> z_mask
    cdef double complex ph = _i_pow(<int> n_y)
    cdef Py_ssize_t dim = amps.shape[0]
    cdef u64 i
    cdef double sign
    with nogil:
        for i in range(<u64> dim):
            sign = 1.0 - 2.0 * qw_parity(i & zm)
            out[i ^ xm] = ph * sign * amps[i]


def accumulate_permuted(double complex[::1] out, double complex[::1] weighted, x_mask):
    """out[i ^ x_mask] += weighted[i]."""
    cdef u64 xm = <u64> x_mask
    cdef Py_ssize_t dim = out.shape[0]
    cdef u64 i
    with nogil:
        for i in range(<u64> dim):
            out[i ^ xm] = out[i ^ xm] + weighted[i]


def accumulate_weighted_permuted(
    double complex[::1] out,
    double complex[::1] weights,
    double complex[::1] amps,
    x_mask,
):
    """out[i ^ x_mask] += weights[i] * amps[i] (fused, no temporary)."""
    cdef u64 xm = <u64> x_mask
    cdef Py_ssize_t dim = out.shape[0]
    cdef u64 i
    with nogil:
        for i in range(<u64> dim):
            out[i ^ xm] = out[i ^ xm] + weights[i] * amps[i]


def apply_cnot(double complex[::1] amps, control, target):
    """In place CNOT."""
    cdef u64 cbit = 1ULL << (<int> control)
    cdef u64 tbit = 1ULL << (<int> target)
    cdef Py_ssize_t dim = amps.shape[0]
    cdef u64 i, j
    cdef double complex tmp
    with nogil:
        # visit each swapped pair once via the target-bit-clear member
        for i in range(<u64> dim):
            if (i & cbit) and not (i & tbit):
                j = i | tbit
                tmp = amps[i]
                amps[i] = amps[j]
                amps[j] = tmp


def apply_x(double complex[::1] amps, qubit):
    """In place Pauli-X on one qubit."""
    cdef u64 bit = 1ULL << (<int> qubit)
    cdef Py_ssize_t dim = amps.shape[0]
    cdef u64 i, j
    cdef double complex tmp
    with nogil:
        for i in range(<u64> dim):
            if not (i & bit):
                j = i | bit
                tmp = amps[i]
                amps[i] = amps[j]
                amps[j] = tmp
