"""A from-scratch LSTM cell with explicit backward pass.

Gate layout follows the classic formulation: forget/input/output gates and
the candidate cell, each computed from the concatenation [h_{t-1}, x_t]
(hidden part first). The cell is written for hand-rolled backpropagation
through time: the forward step returns a cache that the backward step
consumes, accumulating weight gradients into a caller-owned dict keyed
like the weight attributes ("w_f", "b_f", ...).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

WEIGHT_KEYS = ("w_f", "w_i", "w_c", "w_o", "b_f", "b_i", "b_c", "b_o")


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass
class LstmWeights:
    """Four gate matrices of shape (M, M + input_dim) and their bias vectors."""

    w_f: np.ndarray
    w_i: np.ndarray
    w_c: np.ndarray
    w_o: np.ndarray
    b_f: np.ndarray
    b_i: np.ndarray
    b_c: np.ndarray
    b_o: np.ndarray

    def __post_init__(self) -> None:
        m, cat = self.w_f.shape
        for key in WEIGHT_KEYS:
            arr = getattr(self, key)
            expected = (m, cat) if key.startswith("w") else (m,)
            if arr.shape != expected:
                raise ValueError(f"{key} has shape {arr.shape}, expected {expected}")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{key} contains non-finite entries")

    @property
    def hidden_dim(self) -> int:
        return self.w_f.shape[0]

    @property
    def input_dim(self) -> int:
        return self.w_f.shape[1] - self.w_f.shape[0]

    @classmethod
    def initialize(cls, hidden_dim: int, input_dim: int, rng: np.random.Generator) -> LstmWeights:
        """Uniform +-1/sqrt(fan_in) matrices, zero biases."""
        cat = hidden_dim + input_dim
        limit = 1.0 / np.sqrt(cat)
        mats = {k: rng.uniform(-limit, limit, (hidden_dim, cat)) for k in WEIGHT_KEYS[:4]}
        biases = {k: np.zeros(hidden_dim) for k in WEIGHT_KEYS[4:]}
        return cls(**mats, **biases)

    def as_dict(self) -> dict[str, np.ndarray]:
        return {k: getattr(self, k) for k in WEIGHT_KEYS}


@dataclass
class LstmState:
    h: np.ndarray
    c: np.ndarray

    @classmethod
    def zeros(cls, hidden_dim: int) -> LstmState:
        return cls(np.zeros(hidden_dim), np.zeros(hidden_dim))


@dataclass
class LstmStepCache:
    """Everything the backward pass needs about one forward step."""

    concat: np.ndarray  # [h_{t-1}, x_t]
    f: np.ndarray
    i: np.ndarray
    c_bar: np.ndarray
    o: np.ndarray
    c_prev: np.ndarray
    c: np.ndarray
    tanh_c: np.ndarray


def lstm_forward(
    w: LstmWeights, state: LstmState, x: np.ndarray
) -> tuple[LstmState, LstmStepCache]:
    """One cell step; the returned hidden vector state.h is the latent output."""
    if x.shape != (w.input_dim,):
        raise ValueError(f"input has shape {x.shape}, expected ({w.input_dim},)")
    concat = np.concatenate([state.h, x])
    f = _sigmoid(w.w_f @ concat + w.b_f)
    i = _sigmoid(w.w_i @ concat + w.b_i)
    c_bar = np.tanh(w.w_c @ concat + w.b_c)
    o = _sigmoid(w.w_o @ concat + w.b_o)
    c = f * state.c + i * c_bar
    tanh_c = np.tanh(c)
    h = o * tanh_c
    cache = LstmStepCache(concat, f, i, c_bar, o, state.c, c, tanh_c)
    return LstmState(h, c), cache


def lstm_step(w: LstmWeights, state: LstmState, x: np.ndarray) -> tuple[LstmState, np.ndarray]:
    """Public cell step: (new state, latent output phi_t = h_t)."""
    new_state, _ = lstm_forward(w, state, np.asarray(x, dtype=np.float64))
    return new_state, new_state.h


def lstm_backward(
    w: LstmWeights,
    cache: LstmStepCache,
    dh: np.ndarray,
    dc: np.ndarray,
    grads: dict[str, np.ndarray],
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Backprop one step: returns (dh_prev, dc_prev, dx); accumulates into grads."""
    m = w.hidden_dim
    do = dh * cache.tanh_c
    dc_total = dc + dh * cache.o * (1.0 - cache.tanh_c**2)
    df = dc_total * cache.c_prev
    di = dc_total * cache.c_bar
    dc_bar = dc_total * cache.i
    dc_prev = dc_total * cache.f

    dz_f = df * cache.f * (1.0 - cache.f)
    dz_i = di * cache.i * (1.0 - cache.i)
    dz_c = dc_bar * (1.0 - cache.c_bar**2)
    dz_o = do * cache.o * (1.0 - cache.o)

    for key, dz in (("f", dz_f), ("i", dz_i), ("c", dz_c), ("o", dz_o)):
        grads["w_" + key] += np.outer(dz, cache.concat)
        grads["b_" + key] += dz
    dconcat = (
        w.w_f.T @ dz_f + w.w_i.T @ dz_i + w.w_c.T @ dz_c + w.w_o.T @ dz_o
    )
    return dconcat[:m], dc_prev, dconcat[m:]


def zero_weight_grads(w: LstmWeights) -> dict[str, np.ndarray]:
    return {k: np.zeros_like(getattr(w, k)) for k in WEIGHT_KEYS}
