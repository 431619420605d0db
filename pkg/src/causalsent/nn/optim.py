"""Adam with bias correction, plus global-norm gradient clipping."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import BiGRUAttParams, named_arrays


@dataclass
class AdamState:
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)
    t: int = 0


def init_adam(params: BiGRUAttParams) -> AdamState:
    state = AdamState()
    for name, arr in named_arrays(params):
        state.m[name] = np.zeros_like(arr)
        state.v[name] = np.zeros_like(arr)
    return state


def adam_step(params: BiGRUAttParams, grads: BiGRUAttParams, state: AdamState,
              lr: float, beta1: float = 0.9, beta2: float = 0.999,
              eps: float = 1e-8) -> None:
    """theta <- theta - lr * m_hat / (sqrt(v_hat) + eps), in place."""
    state.t += 1
    bc1 = 1.0 - beta1 ** state.t
    bc2 = 1.0 - beta2 ** state.t
    grad_arrays = dict(named_arrays(grads))
    for name, theta in named_arrays(params):
        g = grad_arrays[name]
        m = state.m[name]
        v = state.v[name]
        m *= beta1
        m += (1.0 - beta1) * g
        v *= beta2
        v += (1.0 - beta2) * (g * g)
        theta -= lr * (m / bc1) / (np.sqrt(v / bc2) + eps)


def global_norm(grads: BiGRUAttParams) -> float:
    """L2 norm over all gradient arrays jointly (accumulated in float64)."""
    total = 0.0
    for _, arr in named_arrays(grads):
        total += float(np.sum(np.square(arr, dtype=np.float64)))
    return math.sqrt(total)


def clip_gradients(grads: BiGRUAttParams,
                   threshold: float = 0.25) -> BiGRUAttParams:
    """Scale all gradients by threshold/norm when the global norm exceeds it."""
    norm = global_norm(grads)
    if norm > threshold:
        scale = grads.dtype.type(threshold / norm)
        for _, arr in named_arrays(grads):
            arr *= scale
    return grads
