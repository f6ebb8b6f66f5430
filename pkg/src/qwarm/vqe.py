"""The classical optimization loop around the quantum expectation.

Convergence rule (applied uniformly and reported in every trace): the run
converges at iteration k when |E_t - E_{t-1}| < conv_tol holds for
conv_window consecutive comparisons starting right after iteration k; if no
such window appears within max_iterations evaluations the trace reports
the sentinel max_iterations + 1 (501 under defaults).

final_error_mha uses the minimum-energy iterate of the trace, which is the
meaningful "final" error when decaying schedules oscillate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .ansatz import AnsatzProgram
from .errors import DimensionError
from .gradients import GRADIENT_ENGINES

if TYPE_CHECKING:
    from .dataset import MoleculeRecord
    from .meta import MetaModel

DEFAULT_LR = {"sgd": 0.1, "adam": 0.05}


@dataclass(frozen=True)
class OptimizerConfig:
    kind: str = "adam"
    lr0: float | None = None  # None -> per-kind default (SGD 0.1, Adam 0.05)
    schedule: str = "const"
    decay_factor: float = 0.99
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    max_iterations: int = 500
    conv_window: int = 5
    conv_tol: float = 1e-6
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("sgd", "adam"):
            raise ValueError(f"optimizer kind must be sgd or adam, got {self.kind!r}")
        if self.schedule not in ("const", "decay"):
            raise ValueError(f"schedule must be const or decay, got {self.schedule!r}")
        if self.lr0 is not None and self.lr0 <= 0:
            raise ValueError("lr0 must be positive")
        if not 0 < self.decay_factor <= 1:
            raise ValueError("decay_factor must be in (0, 1]")
        if not (0 < self.adam_beta1 < 1 and 0 < self.adam_beta2 < 1):
            raise ValueError("Adam betas must be in (0, 1)")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")

    @property
    def learning_rate(self) -> float:
        return DEFAULT_LR[self.kind] if self.lr0 is None else self.lr0

    def lr_at(self, iteration: int) -> float:
        """Learning rate for the given 0-based iteration."""
        if self.schedule == "const":
            return self.learning_rate
        return self.learning_rate * self.decay_factor**iteration


@dataclass(frozen=True)
class InitStrategy:
    """How theta_0 is chosen: random [0,1)^N, zeros (HF start), a meta model,
    or an explicit vector ("fixed", used for warm-start chaining)."""

    kind: str  # "random" | "zero" | "lstm" | "lstm-fc" | "fixed"
    model: "MetaModel | None" = None
    theta: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("random", "zero", "lstm", "lstm-fc", "fixed"):
            raise ValueError(f"unknown init kind {self.kind!r}")
        if self.kind in ("lstm", "lstm-fc") and self.model is None:
            raise ValueError(f"init kind {self.kind!r} requires a trained meta model")
        if self.kind == "fixed" and self.theta is None:
            raise ValueError("fixed init requires an explicit parameter vector")


@dataclass
class RunTrace:
    """Per-iteration record of one VQE run."""

    molecule_tag: str
    init_kind: str
    optimizer: str
    schedule: str
    energies: list[float]
    thetas: list[np.ndarray] | None
    iterations_to_converge: int
    fci_energy_ha: float | None = None
    final_error_mha: float | None = field(init=False, default=None)

    def __post_init__(self) -> None:
        if self.fci_energy_ha is not None and self.energies:
            self.final_error_mha = (min(self.energies) - self.fci_energy_ha) * 1000.0

    def errors_mha(self) -> list[float]:
        if self.fci_energy_ha is None:
            raise ValueError("trace has no reference energy")
        return [(e - self.fci_energy_ha) * 1000.0 for e in self.energies]

    def iterations_to_error_below(self, threshold_mha: float) -> int | None:
        """1-based iteration at which the pointwise error first drops below threshold."""
        for t, err in enumerate(self.errors_mha(), start=1):
            if err < threshold_mha:
                return t
        return None


def init_parameters(
    strategy: InitStrategy,
    program: AnsatzProgram,
    molecule: "MoleculeRecord | None" = None,
    seed: int = 0,
) -> np.ndarray:
    """Initial parameter vector of length program.param_count (deterministic per seed)."""
    n = program.param_count
    if strategy.kind == "zero":
        return np.zeros(n, dtype=np.float64)
    if strategy.kind == "fixed":
        theta = np.asarray(strategy.theta, dtype=np.float64)
        if theta.shape != (n,):
            raise DimensionError(f"fixed init has shape {theta.shape}, program needs ({n},)")
        return theta.copy()
    if strategy.kind == "random":
        return np.random.default_rng(seed).uniform(0.0, 1.0, n)
    from .meta import infer_init

    if molecule is None:
        raise ValueError("meta-model initialization needs the molecule record")
    return infer_init(strategy.model, molecule, program)


def sgd_step(theta: np.ndarray, gradient: np.ndarray, lr: float) -> np.ndarray:
    """Plain gradient descent: theta - lr * g."""
    if theta.shape != gradient.shape:
        raise DimensionError("theta/gradient shape mismatch")
    return theta - lr * gradient


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray

    @classmethod
    def zeros(cls, n: int) -> AdamState:
        return cls(np.zeros(n), np.zeros(n))


def adam_step(
    state: AdamState,
    theta: np.ndarray,
    gradient: np.ndarray,
    lr: float,
    t: int,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> tuple[AdamState, np.ndarray]:
    """One bias-corrected Adam update; t is the 1-based step count."""
    if t < 1:
        raise ValueError("Adam step count starts at 1")
    m = beta1 * state.m + (1 - beta1) * gradient
    v = beta2 * state.v + (1 - beta2) * gradient**2
    m_hat = m / (1 - beta1**t)
    v_hat = v / (1 - beta2**t)
    return AdamState(m, v), theta - lr * m_hat / (np.sqrt(v_hat) + eps)


def run_vqe(
    molecule,
    program: AnsatzProgram,
    init: InitStrategy,
    cfg: OptimizerConfig,
    grad_engine: str = "adjoint",
    record_thetas: bool = False,
) -> RunTrace:
    """Optimize the circuit parameters against the molecule's Hamiltonian."""
    engine = GRADIENT_ENGINES[grad_engine]
    h = molecule.hamiltonian
    theta = init_parameters(init, program, molecule, seed=cfg.seed)
    adam = AdamState.zeros(program.param_count)

    energies: list[float] = []
    thetas: list[np.ndarray] | None = [] if record_thetas else None
    streak = 0
    converged_at: int | None = None
    for it in range(cfg.max_iterations):
        res = engine(h, program, theta)
        energies.append(res.energy)
        if record_thetas:
            thetas.append(theta.copy())
        if it >= 1:
            if abs(energies[-1] - energies[-2]) < cfg.conv_tol:
                streak += 1
            else:
                streak = 0
            if streak >= cfg.conv_window:
                converged_at = len(energies) - cfg.conv_window
                break
        lr = cfg.lr_at(it)
        if cfg.kind == "sgd":
            theta = sgd_step(theta, res.gradient, lr)
        else:
            adam, theta = adam_step(
                adam, theta, res.gradient, lr, it + 1,
                cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps,
            )
    return RunTrace(
        molecule_tag=molecule.tag,
        init_kind=init.kind,
        optimizer=cfg.kind,
        schedule=cfg.schedule,
        energies=energies,
        thetas=thetas,
        iterations_to_converge=(
            converged_at if converged_at is not None else cfg.max_iterations + 1
        ),
        fci_energy_ha=molecule.fci_energy_ha,
    )
