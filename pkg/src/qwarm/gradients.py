"""Gradients of E(theta) = <psi(theta)|H|psi(theta)>.

Three routes with one contract:

* adjoint: one forward pass, one H application, one reverse sweep that
  un-applies gates; O(gate count) kernel calls regardless of how many
  parameters the program has. Default everywhere performance matters.
* parameter shift: exact rule, +-pi/2 shifts of each parameterized gate
  occurrence in its effective angle. Cross-check and CLI fallback.
* central finite differences: the numerical oracle.

Shared parameters accumulate by the chain rule through each gate's scale.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .ansatz import AnsatzProgram
from .errors import DimensionError
from .pauli import QubitHamiltonian
from .statevector import apply_gate_inplace, gate_angle, run_amplitudes, _bump


@dataclass(frozen=True)
class GradientResult:
    energy: float
    gradient: np.ndarray

    def __post_init__(self) -> None:
        if not np.all(np.isfinite(self.gradient)):
            raise ValueError("gradient contains non-finite entries")


def _check_theta(program: AnsatzProgram, theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape != (program.param_count,):
        raise DimensionError(
            f"expected {program.param_count} parameters, got shape {theta.shape}"
        )
    return theta


def adjoint_gradient(
    h: QubitHamiltonian, program: AnsatzProgram, theta
) -> GradientResult:
    """Energy and full gradient via the reverse (adjoint) sweep.

    Walking gates last to first with psi_g the state after gate g and
    lambda_g = (gates g+1..G applied in reverse to H psi_G), each rotation
    exp(-i (s*theta)/2 P) contributes  s * Im <lambda_g | P psi_g>  to its
    parameter.
    """
    theta = _check_theta(program, theta)
    psi = run_amplitudes(program, theta)
    energy = h.expectation_amplitudes(psi)
    lam = h.apply_amplitudes(psi)
    grad = np.zeros(program.param_count, dtype=np.float64)
    scratch = np.empty_like(psi)
    for gate in reversed(program.gates):
        if gate.param_index is not None:
            x_mask, z_mask, n_y = gate.masks()
            _kernels.apply_pauli(scratch, psi, x_mask, z_mask, n_y)
            _bump()
            grad[gate.param_index] += gate.scale * float(np.vdot(lam, scratch).imag)
        _unapply(psi, gate, theta)
        _unapply(lam, gate, theta)
    return GradientResult(energy, grad)


def _unapply(amps: np.ndarray, gate, theta: np.ndarray) -> None:
    if gate.kind in ("cnot", "x"):
        apply_gate_inplace(amps, gate)
        return
    eff = gate_angle(gate, theta)
    apply_gate_inplace(amps, gate, theta, angle_offset=-2.0 * eff)


def parameter_shift_gradient(
    h: QubitHamiltonian, program: AnsatzProgram, theta
) -> GradientResult:
    """Exact gradient from +-pi/2 effective-angle shifts, one gate occurrence at a time."""
    theta = _check_theta(program, theta)
    energy = h.expectation_amplitudes(run_amplitudes(program, theta))
    grad = np.zeros(program.param_count, dtype=np.float64)
    for pos, gate in enumerate(program.gates):
        if gate.param_index is None:
            continue
        e_plus = h.expectation_amplitudes(
            run_amplitudes(program, theta, {pos: math.pi / 2})
        )
        e_minus = h.expectation_amplitudes(
            run_amplitudes(program, theta, {pos: -math.pi / 2})
        )
        grad[gate.param_index] += 0.5 * gate.scale * (e_plus - e_minus)
    return GradientResult(energy, grad)


def finite_difference(
    h: QubitHamiltonian, program: AnsatzProgram, theta, step: float = 1e-4
) -> GradientResult:
    """Central-difference gradient oracle, (E(t+s e_k) - E(t-s e_k)) / 2s."""
    if step <= 0:
        raise ValueError("step must be positive")
    theta = _check_theta(program, theta)
    energy = h.expectation_amplitudes(run_amplitudes(program, theta))
    grad = np.zeros(program.param_count, dtype=np.float64)
    for k in range(program.param_count):
        shifted = theta.copy()
        shifted[k] = theta[k] + step
        e_plus = h.expectation_amplitudes(run_amplitudes(program, shifted))
        shifted[k] = theta[k] - step
        e_minus = h.expectation_amplitudes(run_amplitudes(program, shifted))
        grad[k] = (e_plus - e_minus) / (2.0 * step)
    return GradientResult(energy, grad)


GRADIENT_ENGINES = {
    "adjoint": adjoint_gradient,
    "shift": parameter_shift_gradient,
    "fd": finite_difference,
}
