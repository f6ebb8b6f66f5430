"""Offline fixture generator: minimal-basis molecular Hamiltonians.

Pipeline per job: STO-3G integrals (McMurchie-Davidson), restricted
Hartree-Fock with DIIS, MO transformation, interleaved spin-orbital second
quantization, Jordan-Wigner mapping to Pauli strings, and a sparse
eigensolver FCI reference. Emits the JSON fixture format consumed by the
qwarm package.
"""
__version__ = "0.1.0"
