"""Trainable parameters of the BiGRU-attention classifier.

Initialization reproduces the scheme the model was tuned with: the
attention vector is Glorot-uniform (fan_out 1), and every other weight and
bias is uniform in +/- 1/sqrt(hidden_size). Draws happen in a fixed order
from a generator seeded with SeedSequence([seed, 0]), so a seed fully
determines the parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

GATE_ORDER = ("z", "r", "h")  # update, reset, candidate


@dataclass
class GRUCellParams:
    """One direction's gate weights: h_t = (1-z)*h_prev + z*tanh(...)."""

    w_z: np.ndarray  # (d_h, d_in)
    w_r: np.ndarray
    w_h: np.ndarray
    u_z: np.ndarray  # (d_h, d_h)
    u_r: np.ndarray
    u_h: np.ndarray
    b_z: np.ndarray  # (d_h,)
    b_r: np.ndarray
    b_h: np.ndarray

    @property
    def hidden_size(self) -> int:
        return self.w_z.shape[0]

    @property
    def input_size(self) -> int:
        return self.w_z.shape[1]

    def w_stack(self) -> np.ndarray:
        """(3*d_h, d_in) rows ordered z, r, candidate."""
        return np.concatenate([self.w_z, self.w_r, self.w_h], axis=0)

    def b_stack(self) -> np.ndarray:
        return np.concatenate([self.b_z, self.b_r, self.b_h])

    def u_zr_stack(self) -> np.ndarray:
        """(2*d_h, d_h) recurrent weights of the two sigmoid gates."""
        return np.concatenate([self.u_z, self.u_r], axis=0)


@dataclass
class BiGRUAttParams:
    """Both GRU directions plus the attention and output layers."""

    fwd: GRUCellParams
    bwd: GRUCellParams
    u_att: np.ndarray  # (2*d_h,)
    u_p: np.ndarray    # (2*d_h,)
    b_p: np.ndarray    # scalar ()

    @property
    def hidden_size(self) -> int:
        return self.fwd.hidden_size

    @property
    def input_size(self) -> int:
        return self.fwd.input_size

    @property
    def dtype(self):
        return self.u_att.dtype


_CELL_FIELDS = ("w_z", "w_r", "w_h", "u_z", "u_r", "u_h", "b_z", "b_r", "b_h")


def named_arrays(params: BiGRUAttParams) -> list[tuple[str, np.ndarray]]:
    """(name, array) pairs in a fixed, documented order."""
    out = []
    for prefix, cell in (("fwd", params.fwd), ("bwd", params.bwd)):
        for name in _CELL_FIELDS:
            out.append((f"{prefix}.{name}", getattr(cell, name)))
    out.append(("u_att", params.u_att))
    out.append(("u_p", params.u_p))
    out.append(("b_p", params.b_p))
    return out


def from_named(arrays: dict[str, np.ndarray]) -> BiGRUAttParams:
    cells = {}
    for prefix in ("fwd", "bwd"):
        cells[prefix] = GRUCellParams(
            **{name: arrays[f"{prefix}.{name}"] for name in _CELL_FIELDS})
    return BiGRUAttParams(fwd=cells["fwd"], bwd=cells["bwd"],
                          u_att=arrays["u_att"], u_p=arrays["u_p"],
                          b_p=arrays["b_p"])


def copy_params(params: BiGRUAttParams) -> BiGRUAttParams:
    return from_named({name: arr.copy() for name, arr in named_arrays(params)})


def zeros_like_params(params: BiGRUAttParams) -> BiGRUAttParams:
    return from_named({name: np.zeros_like(arr)
                       for name, arr in named_arrays(params)})


def _init_cell(rng: np.random.Generator, d_in: int, d_h: int,
               dtype) -> GRUCellParams:
    bound = 1.0 / math.sqrt(d_h)

    def draw(*shape):
        return rng.uniform(-bound, bound, size=shape).astype(dtype)

    return GRUCellParams(
        w_z=draw(d_h, d_in), w_r=draw(d_h, d_in), w_h=draw(d_h, d_in),
        u_z=draw(d_h, d_h), u_r=draw(d_h, d_h), u_h=draw(d_h, d_h),
        b_z=draw(d_h), b_r=draw(d_h), b_h=draw(d_h),
    )


def init_params(d_in: int, d_h: int, seed: int,
                dtype=np.float32) -> BiGRUAttParams:
    """Fresh parameters, deterministic in (d_in, d_h, seed, dtype)."""
    dtype = np.dtype(dtype)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0]))
    fwd = _init_cell(rng, d_in, d_h, dtype)
    bwd = _init_cell(rng, d_in, d_h, dtype)
    glorot = math.sqrt(6.0 / (2 * d_h + 1))  # fan_in 2*d_h, fan_out 1
    bound = 1.0 / math.sqrt(d_h)
    u_att = rng.uniform(-glorot, glorot, size=2 * d_h).astype(dtype)
    u_p = rng.uniform(-bound, bound, size=2 * d_h).astype(dtype)
    b_p = np.asarray(rng.uniform(-bound, bound), dtype=dtype)
    return BiGRUAttParams(fwd=fwd, bwd=bwd, u_att=u_att, u_p=u_p, b_p=b_p)
