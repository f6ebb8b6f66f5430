"""Pauli-string algebra and qubit Hamiltonians.

Text form of a Pauli string: one character per qubit out of {I, X, Y, Z},
with index 0 = qubit 0 = the leftmost character ("IXYZ" puts X on qubit 1).
Amplitude indices are little-endian: qubit q is bit q of the index.

A Hamiltonian is a real-weighted sum of Pauli strings and is applied
matrix-free. Terms sharing an X/Y flip mask are fused into one permuted
accumulation with a precomputed diagonal weight vector, built lazily per
Hamiltonian and cached (safe to share across threads: rebuilding is
idempotent).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._kernels.numpy_ref import popcount_u64
from .errors import DimensionError, NormalizationError
from .statevector import StateVector

COEFF_DROP_THRESHOLD = 1e-12

_PAULI_CHARS = frozenset("IXYZ")


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Pauli operators, one per qubit."""

    ops: str
    x_mask: int = field(init=False, repr=False, compare=False)
    z_mask: int = field(init=False, repr=False, compare=False)
    n_y: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        bad = set(self.ops) - _PAULI_CHARS
        if bad:
            raise ValueError(f"invalid Pauli characters {sorted(bad)} in {self.ops!r}")
        x = z = ny = 0
        for q, ch in enumerate(self.ops):
            if ch in "XY":
                x |= 1 << q
            if ch in "ZY":
                z |= 1 << q
            if ch == "Y":
                ny += 1
        object.__setattr__(self, "x_mask", x)
        object.__setattr__(self, "z_mask", z)
        object.__setattr__(self, "n_y", ny)

    def __len__(self) -> int:
        return len(self.ops)

    def __str__(self) -> str:
        return self.ops

    @classmethod
    def identity(cls, n_qubits: int) -> PauliString:
        return cls("I" * n_qubits)

    @classmethod
    def single(cls, n_qubits: int, qubit: int, op: str) -> PauliString:
        """Pauli string with one non-identity factor."""
        chars = ["I"] * n_qubits
        chars[qubit] = op
        return cls("".join(chars))

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def phase_exponent(self) -> int:
        """k such that the basis-state action carries the phase i**k (k = n_y mod 4)."""
        return self.n_y & 3


class QubitHamiltonian:
    """Real-weighted sum of Pauli strings acting on a fixed qubit register.

    Immutable after construction; duplicate strings are merged and
    negligible coefficients dropped. Construct via ``merge_terms`` or the
    constructor (which performs the same normalization).
    """

    __slots__ = ("n_qubits", "terms", "_groups")

    def __init__(self, n_qubits: int, terms: list[tuple[float, PauliString]] | tuple = ()):
        if n_qubits < 1:
            raise ValueError("n_qubits must be >= 1")
        merged: dict[str, float] = {}
        order: list[str] = []
        for coeff, string in terms:
            if isinstance(string, str):
                string = PauliString(string)
            if len(string) != n_qubits:
                raise DimensionError(
                    f"Pauli string {string.ops!r} has length {len(string)}, expected {n_qubits}"
                )
            coeff = float(coeff)
            if not np.isfinite(coeff):
                raise ValueError(f"non-finite coefficient for {string.ops!r}")
            if string.ops not in merged:
                merged[string.ops] = 0.0
                order.append(string.ops)
            merged[string.ops] += coeff
        kept = tuple(
            (merged[ops], PauliString(ops))
            for ops in order
            if abs(merged[ops]) >= COEFF_DROP_THRESHOLD
        )
        self.n_qubits = n_qubits
        self.terms = kept
        self._groups: list[tuple[int, np.ndarray]] | None = None

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"QubitHamiltonian(n_qubits={self.n_qubits}, n_terms={len(self.terms)})"

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def _build_groups(self) -> list[tuple[int, np.ndarray]]:
        """Fuse terms by x_mask into (x_mask, diagonal weight vector) pairs.

        The weight vector w satisfies (H v)[i ^ x] += w[i] v[i] summed over
        groups, folding each term's coefficient, i**n_y phase and Z-parity
        signs into one complex diagonal.
        """
        indices = np.arange(self.dim, dtype=np.uint64)
        by_x: dict[int, np.ndarray] = {}
        i_pow = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)
        for coeff, string in self.terms:
            bits = popcount_u64(indices & np.uint64(string.z_mask))
            signs = 1.0 - 2.0 * (bits.astype(np.uint64) & np.uint64(1)).astype(np.float64)
            w = (coeff * i_pow[string.phase_exponent()]) * signs
            if string.x_mask in by_x:
                by_x[string.x_mask] += w
            else:
                by_x[string.x_mask] = w
        return sorted(by_x.items())

    def apply_amplitudes(self, amps: np.ndarray) -> np.ndarray:
        """H @ amps on a raw complex amplitude array (input unmodified)."""
        if amps.shape[0] != self.dim:
            raise DimensionError(
                f"state has {amps.shape[0]} amplitudes, Hamiltonian needs {self.dim}"
            )
        if self._groups is None:
            self._groups = self._build_groups()
        out = np.zeros(self.dim, dtype=np.complex128)
        for x_mask, weights in self._groups:
            _kernels.accumulate_weighted_permuted(out, weights, amps, x_mask)
        return out

    def expectation_amplitudes(self, amps: np.ndarray) -> float:
        """Re <v|H|v> for a normalized raw amplitude array."""
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > 1e-10:
            raise NormalizationError(f"state norm^2 = {norm_sq!r}, expected 1 within 1e-10")
        val = complex(np.vdot(amps, self.apply_amplitudes(amps)))
        assert abs(val.imag) < 1e-9, f"non-real expectation of Hermitian operator: {val!r}"
        return val.real


def merge_terms(terms: list[tuple[float, PauliString | str]]) -> QubitHamiltonian:
    """Build a Hamiltonian from (coefficient, string) pairs.

    Duplicate strings are summed; coefficients below 1e-12 in magnitude are
    dropped. All strings must share one length.
    """
    if not terms:
        raise ValueError("cannot infer qubit count from an empty term list")
    first = terms[0][1]
    n_qubits = len(first if isinstance(first, str) else first.ops)
    return QubitHamiltonian(n_qubits, terms)


def apply_hamiltonian(h: QubitHamiltonian, v: StateVector) -> StateVector:
    """Matrix-free H|v>; the input vector is left unmodified."""
    if v.n_qubits != h.n_qubits:
        raise DimensionError(f"state has {v.n_qubits} qubits, Hamiltonian has {h.n_qubits}")
    return StateVector(v.n_qubits, h.apply_amplitudes(v.amplitudes))


def expectation(h: QubitHamiltonian, v: StateVector) -> float:
    """<v|H|v> for a normalized state; guaranteed real for real-weighted H."""
    if v.n_qubits != h.n_qubits:
        raise DimensionError(f"state has {v.n_qubits} qubits, Hamiltonian has {h.n_qubits}")
    return h.expectation_amplitudes(v.amplitudes)
