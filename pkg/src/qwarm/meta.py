"""Recurrent warm-start model: LSTM core, per-molecule projection heads,
trajectory-weighted training, and initialization inference.

The model unrolls for T steps against a molecule's circuit. At step t it
receives the previous parameters (padded or truncated to the fixed input
width) together with the previous correlation signal y_{t-1} = E_{t-1} - E_HF,
emits a latent phi_t, and maps it to circuit parameters either through the
molecule's fully connected head (mode "fc", singles block then doubles
block) or by plain truncation of phi_t (mode "pad"). The training loss is
the late-step-weighted energy average  (1/T) * sum_t 0.1 * t * E_t.

Feeding y as correlation energy rather than total energy keeps the input
O(0.1) across molecules whose absolute energies differ by orders of
magnitude; raw totals would pin the gates.

Training backpropagates through the whole unroll: each step's quantum
energy gradient (adjoint) enters both through the loss weight and through
the next step's inputs (theta and y paths).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from .ansatz import AnsatzProgram
from .errors import DivergenceError
from .gradients import GRADIENT_ENGINES
from .lstm import (
    LstmState,
    LstmStepCache,
    LstmWeights,
    WEIGHT_KEYS,
    lstm_backward,
    lstm_forward,
    zero_weight_grads,
)
from .statevector import run_amplitudes

if TYPE_CHECKING:
    from .dataset import MoleculeRecord

CHECKPOINT_VERSION = 1
HEAD_INIT_SCALE = 0.01  # uniform +-0.01 head weights: theta ~ 0, i.e. an HF start


def pad_or_truncate(x, width: int) -> np.ndarray:
    """Zero-pad up to width, or keep the first width components."""
    if width < 1:
        raise ValueError("width must be >= 1")
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] >= width:
        return x[:width].copy()
    out = np.zeros(width, dtype=np.float64)
    out[: x.shape[0]] = x
    return out


def truncate_output(y_hat, n: int) -> np.ndarray:
    """First n components of a latent output; n may not exceed its length."""
    y_hat = np.asarray(y_hat, dtype=np.float64)
    if n > y_hat.shape[0]:
        raise ValueError(f"cannot truncate length-{y_hat.shape[0]} output to {n}")
    return y_hat[:n].copy()


@dataclass
class FcHead:
    """Molecule-specific projection from the latent to circuit parameters."""

    molecule_tag: str
    w_s: np.ndarray
    b_s: np.ndarray
    w_d: np.ndarray
    b_d: np.ndarray

    def __post_init__(self) -> None:
        if self.w_s.shape[0] != self.b_s.shape[0] or self.w_d.shape[0] != self.b_d.shape[0]:
            raise ValueError("head weight/bias shapes disagree")
        if self.w_s.shape[1] != self.w_d.shape[1]:
            raise ValueError("head blocks disagree on latent dimension")

    @property
    def n_singles(self) -> int:
        return self.w_s.shape[0]

    @property
    def n_doubles(self) -> int:
        return self.w_d.shape[0]

    @classmethod
    def initialize(
        cls, molecule_tag: str, n_singles: int, n_doubles: int, hidden_dim: int,
        rng: np.random.Generator,
    ) -> FcHead:
        return cls(
            molecule_tag=molecule_tag,
            w_s=rng.uniform(-HEAD_INIT_SCALE, HEAD_INIT_SCALE, (n_singles, hidden_dim)),
            b_s=np.zeros(n_singles),
            w_d=rng.uniform(-HEAD_INIT_SCALE, HEAD_INIT_SCALE, (n_doubles, hidden_dim)),
            b_d=np.zeros(n_doubles),
        )


def fc_project(head: FcHead, phi: np.ndarray) -> np.ndarray:
    """theta = [W_s phi + b_s ; W_d phi + b_d], singles block first."""
    phi = np.asarray(phi, dtype=np.float64)
    return np.concatenate([head.w_s @ phi + head.b_s, head.w_d @ phi + head.b_d])


@dataclass
class MetaModel:
    lstm: LstmWeights
    heads: dict[str, FcHead]
    mode: str  # "fc" | "pad"
    input_dim: int
    unroll_steps: int

    def __post_init__(self) -> None:
        if self.mode not in ("fc", "pad"):
            raise ValueError(f"mode must be fc or pad, got {self.mode!r}")
        if self.lstm.input_dim != self.input_dim:
            raise ValueError("LSTM weight shapes disagree with input_dim")

    @property
    def hidden_dim(self) -> int:
        return self.lstm.hidden_dim

    def head_for(self, tag: str) -> FcHead:
        try:
            return self.heads[tag]
        except KeyError:
            raise KeyError(
                f"model has no projection head for {tag!r}"
                f" (available: {sorted(self.heads)})"
            ) from None


def create_model(
    mode: str, hidden_dim: int, unroll_steps: int = 10,
    input_dim: int | None = None, seed: int = 0,
) -> MetaModel:
    """Fresh model; input width defaults to hidden_dim + 1 (theta block + energy signal)."""
    if input_dim is None:
        input_dim = hidden_dim + 1
    rng = np.random.default_rng([seed, 0])
    return MetaModel(
        lstm=LstmWeights.initialize(hidden_dim, input_dim, rng),
        heads={},
        mode=mode,
        input_dim=input_dim,
        unroll_steps=unroll_steps,
    )


def ensure_head(model: MetaModel, program: AnsatzProgram, seed: int = 0) -> FcHead:
    """Create (deterministically) the head for a program's molecule if missing."""
    tag = program.molecule_tag
    if tag in model.heads:
        return model.heads[tag]
    if program.param_split is not None:
        n_s, n_d = program.param_split
    else:
        n_s, n_d = program.param_count, 0
    rng = np.random.default_rng([seed, 1, *tag.encode()])
    head = FcHead.initialize(tag, n_s, n_d, model.hidden_dim, rng)
    model.heads[tag] = head
    return head


@dataclass
class UnrollResult:
    thetas: list[np.ndarray]
    energies: list[float]
    loss: float

    @property
    def trajectory(self) -> list[tuple[np.ndarray, float]]:
        return list(zip(self.thetas, self.energies))


@dataclass
class _StepCache:
    x: np.ndarray
    lstm: LstmStepCache
    phi: np.ndarray
    theta: np.ndarray
    quantum_grad: np.ndarray | None


def _project(model: MetaModel, tag: str, phi: np.ndarray, n_params: int) -> np.ndarray:
    if model.mode == "fc":
        return fc_project(model.head_for(tag), phi)
    return truncate_output(phi, n_params)


def _weighted_loss(energies: list[float]) -> float:
    t_count = len(energies)
    return sum(0.1 * t * e for t, e in enumerate(energies, start=1)) / t_count


def unroll(
    model: MetaModel,
    molecule: "MoleculeRecord",
    program: AnsatzProgram,
    grad_engine: str | None = None,
) -> tuple[UnrollResult, list[_StepCache]]:
    """Run the T-step trajectory on one molecule.

    With grad_engine set, each step also evaluates dE/dtheta (needed for
    training); without it only energies are computed. Returns the result
    and the per-step caches for backpropagation.
    """
    h = molecule.hamiltonian
    engine = GRADIENT_ENGINES[grad_engine] if grad_engine else None
    state = LstmState.zeros(model.hidden_dim)
    theta_block = pad_or_truncate(molecule.features, model.input_dim - 1)
    y_prev = 0.0
    thetas: list[np.ndarray] = []
    energies: list[float] = []
    caches: list[_StepCache] = []
    for _t in range(model.unroll_steps):
        x = np.concatenate([theta_block, [y_prev]])
        state, lstm_cache = lstm_forward(model.lstm, state, x)
        phi = state.h
        theta = _project(model, program.molecule_tag, phi, program.param_count)
        if not np.all(np.isfinite(theta)):
            raise DivergenceError(
                f"non-finite circuit parameters during unroll on {program.molecule_tag}"
            )
        if engine is not None:
            res = engine(h, program, theta)
            energy, qgrad = res.energy, res.gradient
        else:
            energy = h.expectation_amplitudes(run_amplitudes(program, theta))
            qgrad = None
        thetas.append(theta)
        energies.append(energy)
        caches.append(_StepCache(x, lstm_cache, phi.copy(), theta, qgrad))
        theta_block = pad_or_truncate(theta, model.input_dim - 1)
        y_prev = energy - molecule.hf_energy_ha
    return UnrollResult(thetas, energies, _weighted_loss(energies)), caches


def infer_init(
    model: MetaModel, molecule: "MoleculeRecord", program: AnsatzProgram
) -> np.ndarray:
    """Final-step parameters theta_T, used as the VQE initialization."""
    result, _ = unroll(model, molecule, program)
    return result.thetas[-1]


def _backpropagate(
    model: MetaModel,
    molecule: "MoleculeRecord",
    program: AnsatzProgram,
    caches: list[_StepCache],
) -> dict[str, np.ndarray]:
    """Gradients of the weighted trajectory loss w.r.t. all trainable weights."""
    t_count = len(caches)
    in_width = model.input_dim - 1
    n_params = program.param_count
    tag = program.molecule_tag

    grads: dict[str, np.ndarray] = {
        f"lstm.{k}": g for k, g in zero_weight_grads(model.lstm).items()
    }
    if model.mode == "fc":
        head = model.head_for(tag)
        grads[f"head.{tag}.w_s"] = np.zeros_like(head.w_s)
        grads[f"head.{tag}.b_s"] = np.zeros_like(head.b_s)
        grads[f"head.{tag}.w_d"] = np.zeros_like(head.w_d)
        grads[f"head.{tag}.b_d"] = np.zeros_like(head.b_d)

    dh_next = np.zeros(model.hidden_dim)
    dc_next = np.zeros(model.hidden_dim)
    dtheta_carry = np.zeros(n_params)  # dL/dtheta_t via x_{t+1}
    dy_carry = 0.0  # dL/dy_t via x_{t+1}
    lstm_grads = {k: grads[f"lstm.{k}"] for k in WEIGHT_KEYS}

    for t in range(t_count, 0, -1):
        cache = caches[t - 1]
        de = 0.1 * t / t_count + dy_carry  # loss weight + energy-signal path
        dtheta = de * cache.quantum_grad + dtheta_carry
        if model.mode == "fc":
            head = model.head_for(tag)
            ds, dd = dtheta[: head.n_singles], dtheta[head.n_singles :]
            grads[f"head.{tag}.w_s"] += np.outer(ds, cache.phi)
            grads[f"head.{tag}.b_s"] += ds
            grads[f"head.{tag}.w_d"] += np.outer(dd, cache.phi)
            grads[f"head.{tag}.b_d"] += dd
            dphi = head.w_s.T @ ds + head.w_d.T @ dd
        else:
            dphi = np.zeros(model.hidden_dim)
            dphi[:n_params] = dtheta
        dh_next, dc_next, dx = lstm_backward(
            model.lstm, cache.lstm, dphi + dh_next, dc_next, lstm_grads
        )
        if t > 1:
            dtheta_carry = np.zeros(n_params)
            k = min(n_params, in_width)
            dtheta_carry[:k] = dx[:k]
            dy_carry = float(dx[-1])
    return grads


@dataclass(frozen=True)
class TrainConfig:
    unroll_steps: int = 10
    lstm_lr: float = 0.005
    epochs_max: int = 300
    early_stop_rel_tol: float = 1e-4
    seed: int = 0
    grad_engine: str = "adjoint"

    def __post_init__(self) -> None:
        if self.unroll_steps < 1:
            raise ValueError("unroll_steps must be >= 1")
        if self.early_stop_rel_tol <= 0:
            raise ValueError("early_stop_rel_tol must be positive")


class _Adam:
    """Per-array Adam with independent step counters (sparse group updates)."""

    def __init__(self, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.state: dict[str, tuple[np.ndarray, np.ndarray, int]] = {}

    def update(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray], lr: float) -> None:
        for name, g in grads.items():
            arr = params[name]
            m, v, t = self.state.get(name, (np.zeros_like(arr), np.zeros_like(arr), 0))
            t += 1
            m = self.beta1 * m + (1 - self.beta1) * g
            v = self.beta2 * v + (1 - self.beta2) * g**2
            self.state[name] = (m, v, t)
            m_hat = m / (1 - self.beta1**t)
            v_hat = v / (1 - self.beta2**t)
            arr -= lr * m_hat / (np.sqrt(v_hat) + self.eps)


def _param_views(model: MetaModel) -> dict[str, np.ndarray]:
    params = {f"lstm.{k}": getattr(model.lstm, k) for k in WEIGHT_KEYS}
    for tag, head in model.heads.items():
        params[f"head.{tag}.w_s"] = head.w_s
        params[f"head.{tag}.b_s"] = head.b_s
        params[f"head.{tag}.w_d"] = head.w_d
        params[f"head.{tag}.b_d"] = head.b_d
    return params


def _check_finite(loss: float, tag: str, epoch: int) -> None:
    if not np.isfinite(loss):
        raise DivergenceError(
            f"training loss became non-finite on {tag} at epoch {epoch}"
        )


def train(
    model: MetaModel,
    train_set: list[tuple["MoleculeRecord", AnsatzProgram]],
    cfg: TrainConfig,
    freeze_lstm: bool = False,
) -> list[float]:
    """Train in place; returns the epoch-mean loss history.

    One Adam update per molecule visit, molecules in the given order.
    Stops when the relative change of the epoch-mean loss drops below
    early_stop_rel_tol or epochs_max is reached. With freeze_lstm only the
    projection heads receive updates (used to adapt a held-out molecule's
    head to an already-trained latent model).
    """
    if not train_set:
        raise ValueError("training set is empty")
    model.unroll_steps = cfg.unroll_steps
    for _, program in train_set:
        if model.mode == "fc":
            ensure_head(model, program, seed=cfg.seed)
    params = _param_views(model)
    opt = _Adam()
    history: list[float] = []
    for epoch in range(cfg.epochs_max):
        losses = []
        for record, program in train_set:
            result, caches = unroll(model, record, program, grad_engine=cfg.grad_engine)
            _check_finite(result.loss, program.molecule_tag, epoch)
            losses.append(result.loss)
            grads = _backpropagate(model, record, program, caches)
            if freeze_lstm:
                grads = {k: g for k, g in grads.items() if not k.startswith("lstm.")}
            if grads:
                opt.update(params, grads, cfg.lstm_lr)
        epoch_loss = float(np.mean(losses))
        _check_finite(epoch_loss, "epoch mean", epoch)
        history.append(epoch_loss)
        if epoch >= 1:
            prev = history[-2]
            rel = abs(epoch_loss - prev) / max(abs(prev), 1e-30)
            if rel < cfg.early_stop_rel_tol:
                break
    return history


def adapt_head(
    model: MetaModel,
    record: "MoleculeRecord",
    program: AnsatzProgram,
    cfg: TrainConfig,
) -> list[float]:
    """Train only one molecule's head against the frozen latent model."""
    if model.mode != "fc":
        raise ValueError("head adaptation only applies to fc mode")
    ensure_head(model, program, seed=cfg.seed)
    return train(model, [(record, program)], cfg, freeze_lstm=True)


def save_checkpoint(model: MetaModel, path: str | Path) -> None:
    doc = {
        "format_version": CHECKPOINT_VERSION,
        "mode": model.mode,
        "hidden_dim": model.hidden_dim,
        "input_dim": model.input_dim,
        "unroll_steps": model.unroll_steps,
        "lstm": {k: getattr(model.lstm, k).tolist() for k in WEIGHT_KEYS},
        "heads": {
            tag: {
                "w_s": head.w_s.tolist(),
                "b_s": head.b_s.tolist(),
                "w_d": head.w_d.tolist(),
                "b_d": head.b_d.tolist(),
            }
            for tag, head in sorted(model.heads.items())
        },
    }
    Path(path).write_text(json.dumps(doc))


def load_checkpoint(path: str | Path) -> MetaModel:
    doc = json.loads(Path(path).read_text())
    if doc.get("format_version") != CHECKPOINT_VERSION:
        raise ValueError(f"unsupported checkpoint version {doc.get('format_version')!r}")
    lstm = LstmWeights(**{k: np.asarray(doc["lstm"][k], dtype=np.float64) for k in WEIGHT_KEYS})
    heads = {
        tag: FcHead(
            molecule_tag=tag,
            w_s=np.asarray(entry["w_s"], dtype=np.float64),
            b_s=np.asarray(entry["b_s"], dtype=np.float64),
            w_d=np.asarray(entry["w_d"], dtype=np.float64),
            b_d=np.asarray(entry["b_d"], dtype=np.float64),
        )
        for tag, entry in doc["heads"].items()
    }
    return MetaModel(
        lstm=lstm,
        heads=heads,
        mode=doc["mode"],
        input_dim=int(doc["input_dim"]),
        unroll_steps=int(doc["unroll_steps"]),
    )
