"""Dense statevector simulation: state preparation and gate application.

Amplitude ordering is little-endian: qubit q is bit q of the amplitude
index, so |q1 q0> = "10" (occupation text, leftmost char = qubit 0) sits at
index 1. Occupation strings follow the same qubit-0-leftmost convention as
Pauli strings.

Every parameterized gate is a Pauli rotation exp(-i * (scale * angle)/2 * P)
for some Pauli string P; RX/RY/RZ are the single-qubit cases. CNOT and X are
the only non-parameterized kinds.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import _kernels
from .errors import DimensionError

if TYPE_CHECKING:
    from .pauli import PauliString

PARAMETERIZED_KINDS = frozenset({"pauli_rot", "rx", "ry", "rz"})

# kernel-call counter, used by tests to assert gradient cost contracts
_kernel_ops = 0


def kernel_op_count() -> int:
    """Total low-level gate/operator applications since import (test instrumentation)."""
    return _kernel_ops


def _bump(n: int = 1) -> None:
    global _kernel_ops
    _kernel_ops += n


@dataclass
class StateVector:
    """Complex amplitudes over the 2**n_qubits computational basis."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise DimensionError(
                f"expected {1 << self.n_qubits} amplitudes, got {self.amplitudes.shape}"
            )

    def copy(self) -> StateVector:
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class Gate:
    """One circuit operation.

    kind: "pauli_rot", "rx", "ry", "rz", "cnot" or "x". Parameterized kinds
    carry exactly one of param_index (angle read from the parameter vector)
    or fixed_angle; cnot/x carry neither. The effective rotation angle is
    scale * angle, with scale folding per-term factors of shared-parameter
    decompositions (UCCSD singles use +-1/2, doubles +-1/8).
    """

    kind: str
    qubits: tuple[int, ...] = ()
    pauli: "PauliString | None" = None
    scale: float = 1.0
    param_index: int | None = None
    fixed_angle: float | None = None

    def __post_init__(self) -> None:
        if self.kind in PARAMETERIZED_KINDS:
            if (self.param_index is None) == (self.fixed_angle is None):
                raise ValueError(
                    f"{self.kind} gate needs exactly one of param_index / fixed_angle"
                )
            if self.kind == "pauli_rot" and self.pauli is None:
                raise ValueError("pauli_rot gate needs a Pauli string")
        elif self.kind in ("cnot", "x"):
            if self.param_index is not None or self.fixed_angle is not None:
                raise ValueError(f"{self.kind} gate carries no angle")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")

    @property
    def is_parameterized(self) -> bool:
        return self.param_index is not None

    def masks(self) -> tuple[int, int, int]:
        """(x_mask, z_mask, n_y) of the rotation generator."""
        if self.kind == "pauli_rot":
            p = self.pauli
            return p.x_mask, p.z_mask, p.n_y
        bit = 1 << self.qubits[0]
        if self.kind == "rx":
            return bit, 0, 0
        if self.kind == "ry":
            return bit, bit, 1
        if self.kind == "rz":
            return 0, bit, 0
        raise ValueError(f"{self.kind} gate has no rotation generator")


def prepare_basis_state(n_qubits: int, occupation: str) -> StateVector:
    """Computational basis state from an occupation string ("1100" sets qubits 0,1)."""
    if len(occupation) != n_qubits:
        raise DimensionError(
            f"occupation {occupation!r} has length {len(occupation)}, expected {n_qubits}"
        )
    if set(occupation) - {"0", "1"}:
        raise ValueError(f"occupation must be over {{0,1}}, got {occupation!r}")
    index = 0
    for q, ch in enumerate(occupation):
        if ch == "1":
            index |= 1 << q
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(n_qubits, amps)


def basis_index(occupation: str) -> int:
    """Amplitude index of a computational basis state."""
    idx = 0
    for q, ch in enumerate(occupation):
        if ch == "1":
            idx |= 1 << q
    return idx


def gate_angle(gate: Gate, theta: np.ndarray | None) -> float:
    """Effective rotation angle scale * angle for a parameterized gate."""
    if gate.param_index is not None:
        if theta is None:
            raise ValueError(f"{gate.kind} gate is parameter-bound but no angle was supplied")
        return gate.scale * float(theta[gate.param_index])
    return gate.scale * float(gate.fixed_angle)


def apply_gate_inplace(
    amps: np.ndarray, gate: Gate, theta: np.ndarray | None = None, angle_offset: float = 0.0
) -> None:
    """Apply one gate to a raw amplitude array in place.

    angle_offset is added to the *effective* angle (used by the
    parameter-shift rule to shift one gate occurrence).
    """
    _bump()
    if gate.kind == "cnot":
        _kernels.apply_cnot(amps, gate.qubits[0], gate.qubits[1])
        return
    if gate.kind == "x":
        _kernels.apply_x(amps, gate.qubits[0])
        return
    x_mask, z_mask, n_y = gate.masks()
    if max(x_mask, z_mask) >= amps.shape[0]:
        raise DimensionError(f"gate on qubits {gate.qubits} exceeds register size")
    angle = gate_angle(gate, theta) + angle_offset
    _kernels.apply_pauli_rotation(amps, x_mask, z_mask, n_y, angle)


def apply_gate(state: StateVector, gate: Gate, theta: float | None = None) -> StateVector:
    """Pure single-gate application; returns a new state.

    For a parameter-bound gate, theta is the bound parameter's value; for
    fixed-angle / angle-free gates it must be omitted.
    """
    if gate.is_parameterized:
        if theta is None:
            raise ValueError("parameter-bound gate requires an angle")
        vec = np.asarray([theta], dtype=np.float64)
        g = Gate(
            kind=gate.kind,
            qubits=gate.qubits,
            pauli=gate.pauli,
            scale=gate.scale,
            param_index=0,
        )
    else:
        if theta is not None:
            raise ValueError(f"{gate.kind} gate takes no angle argument")
        vec = None
        g = gate
    out = state.copy()
    apply_gate_inplace(out.amplitudes, g, vec)
    return out


def run_amplitudes(
    program,
    theta: np.ndarray,
    angle_offsets: dict[int, float] | None = None,
) -> np.ndarray:
    """Reference-state preparation followed by all program gates, as raw amplitudes.

    angle_offsets maps gate positions to effective-angle shifts.
    """
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape != (program.param_count,):
        raise DimensionError(
            f"program expects {program.param_count} parameters, got {theta.shape}"
        )
    amps = prepare_basis_state(program.n_qubits, program.reference_occupation).amplitudes
    for pos, gate in enumerate(program.gates):
        offset = angle_offsets.get(pos, 0.0) if angle_offsets else 0.0
        apply_gate_inplace(amps, gate, theta, offset)
    return amps


def run_circuit(program, theta) -> StateVector:
    """Execute an ansatz program at the given parameter vector (deterministic)."""
    amps = run_amplitudes(program, np.asarray(theta, dtype=np.float64))
    return StateVector(program.n_qubits, amps)
