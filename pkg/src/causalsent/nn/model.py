"""Forward and backward passes of the BiGRU self-attention classifier.

Given token embeddings <e_1..e_n>, two GRUs read the sentence left-to-right
and right-to-left; their per-position states are concatenated, pooled by a
linear self-attention (score u_att . h_i, softmax over positions, weighted
sum s), and fed to a sigmoid output p = sigma(u_p . s + b_p). Dropout is
applied to the embeddings (input connections) and to the concatenated
states (output connections) during training only, in inverted form.

Everything here is differentiated by hand; the time recurrence itself runs
in the selected kernel backend. Input embeddings are frozen and receive no
gradient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .params import BiGRUAttParams, GRUCellParams, from_named, named_arrays

PROB_CLAMP = 1e-7


class DivergenceError(RuntimeError):
    """A forward or backward pass produced non-finite values."""


def _sigmoid(x):
    x = np.asarray(x)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


# ---------------------------------------------------------------------------
# single-sequence building blocks (also the readable reference for the math)
# ---------------------------------------------------------------------------

def gru_step(cell: GRUCellParams, x_t: np.ndarray,
             h_prev: np.ndarray) -> np.ndarray:
    """One GRU step: h_t = (1-z)*h_prev + z*tanh(W_h x + U_h (r*h_prev) + b_h)."""
    if x_t.shape[-1] != cell.input_size or h_prev.shape[-1] != cell.hidden_size:
        raise ValueError(f"shape mismatch: x {x_t.shape}, h {h_prev.shape}, "
                         f"cell ({cell.hidden_size}, {cell.input_size})")
    z = _sigmoid(cell.w_z @ x_t + cell.u_z @ h_prev + cell.b_z)
    r = _sigmoid(cell.w_r @ x_t + cell.u_r @ h_prev + cell.b_r)
    hc = np.tanh(cell.w_h @ x_t + cell.u_h @ (r * h_prev) + cell.b_h)
    h_t = (1.0 - z) * h_prev + z * hc
    if not np.isfinite(h_t).all():
        raise DivergenceError("non-finite GRU state")
    return h_t


def bigru_forward(params: BiGRUAttParams, seq: np.ndarray) -> np.ndarray:
    """(n, d_in) embeddings -> (n, 2*d_h) concatenated [forward; backward] states."""
    if seq.ndim != 2 or seq.shape[0] < 1:
        raise ValueError(f"need a (n, d_in) sequence, got shape {seq.shape}")
    if seq.shape[1] != params.input_size:
        raise ValueError(f"embedding dim {seq.shape[1]} != model input "
                         f"{params.input_size}")
    x = seq.astype(params.dtype, copy=False)[:, None, :]  # batch of one
    mask = np.ones(x.shape[:2], dtype=params.dtype)
    halves = []
    for cell, reverse in ((params.fwd, False), (params.bwd, True)):
        gx = _input_projections(x, cell)
        h, _, _, _ = kernels.gru_forward(gx, cell.u_zr_stack(), cell.u_h,
                                         mask, reverse)
        halves.append(h[:, 0, :])
    return np.concatenate(halves, axis=1)


@dataclass
class AttentionOutput:
    raw_scores: np.ndarray          # (n,)
    weights: np.ndarray             # (n,) softmax-normalized
    sentence_embedding: np.ndarray  # (2*d_h,)


def attend(u_att: np.ndarray, states: np.ndarray) -> AttentionOutput:
    """Linear self-attention pooling of per-position states."""
    if states.ndim != 2 or states.shape[0] < 1:
        raise ValueError(f"need (n, d) states, got shape {states.shape}")
    raw = states @ u_att
    e = np.exp(raw - raw.max())
    weights = e / e.sum()
    return AttentionOutput(raw_scores=raw, weights=weights,
                           sentence_embedding=weights @ states)


def predict_prob(u_p: np.ndarray, b_p, s: np.ndarray) -> float:
    """Causal probability sigma(u_p . s + b_p)."""
    z = float(np.asarray(s @ u_p + b_p))
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    ez = math.exp(z)
    return ez / (1.0 + ez)


def bce_loss(p: float, y: int) -> float:
    """Cross-entropy of one prediction, with probability clamped away from 0/1."""
    q = min(max(p, PROB_CLAMP), 1.0 - PROB_CLAMP)
    return float(-(y * math.log(q) + (1 - y) * math.log(1.0 - q)))


# ---------------------------------------------------------------------------
# batched training path
# ---------------------------------------------------------------------------

def pad_batch(seqs: list[np.ndarray], dtype) -> tuple[np.ndarray, np.ndarray]:
    """Stack variable-length (n_i, d) sequences time-major with a 0/1 mask."""
    T = max(s.shape[0] for s in seqs)
    B = len(seqs)
    d = seqs[0].shape[1]
    x = np.zeros((T, B, d), dtype=dtype)
    mask = np.zeros((T, B), dtype=dtype)
    for b, s in enumerate(seqs):
        x[:s.shape[0], b, :] = s
        mask[:s.shape[0], b] = 1.0
    return x, mask


def make_dropout_mask(rng: np.random.Generator, shape, rate: float, dtype):
    """Inverted-dropout mask (already scaled by 1/keep); None when rate is 0."""
    if rate == 0.0:
        return None
    dtype = np.dtype(dtype)
    keep = 1.0 - rate
    return (rng.random(shape) < keep).astype(dtype) / dtype.type(keep)


@dataclass
class ForwardCache:
    x: np.ndarray          # (T, B, d_in) after input dropout
    mask: np.ndarray       # (T, B)
    h_f: tuple             # kernel outputs (h, z, r, hc), forward direction
    h_b: tuple             # same, backward direction
    states: np.ndarray     # (T, B, 2H) after output dropout
    weights: np.ndarray    # (T, B) attention
    s: np.ndarray          # (B, 2H)
    probs: np.ndarray      # (B,)
    drop_out: np.ndarray | None


def _input_projections(x: np.ndarray, cell: GRUCellParams) -> np.ndarray:
    T, B, d = x.shape
    flat = x.reshape(T * B, d) @ cell.w_stack().T + cell.b_stack()
    return np.ascontiguousarray(flat.reshape(T, B, 3 * cell.hidden_size))


def forward_batch(params: BiGRUAttParams, x: np.ndarray, mask: np.ndarray,
                  drop_in: np.ndarray | None = None,
                  drop_out: np.ndarray | None = None) -> ForwardCache:
    """Full forward pass over a padded batch; caches everything backward needs."""
    if x.shape[2] != params.input_size:
        raise ValueError(f"embedding dim {x.shape[2]} != model input "
                         f"{params.input_size}")
    if drop_in is not None:
        x = x * drop_in
    h_f = kernels.gru_forward(_input_projections(x, params.fwd),
                              params.fwd.u_zr_stack(), params.fwd.u_h,
                              mask, False)
    h_b = kernels.gru_forward(_input_projections(x, params.bwd),
                              params.bwd.u_zr_stack(), params.bwd.u_h,
                              mask, True)
    states = np.concatenate([h_f[0], h_b[0]], axis=2)
    if drop_out is not None:
        states = states * drop_out
    scores = np.where(mask > 0, states @ params.u_att, -np.inf)
    e = np.exp(scores - scores.max(axis=0))
    weights = e / e.sum(axis=0)
    s = np.einsum("tb,tbk->bk", weights, states)
    probs = _sigmoid(s @ params.u_p + params.b_p)
    if not (np.isfinite(states).all() and np.isfinite(probs).all()):
        raise DivergenceError("non-finite forward pass")
    return ForwardCache(x=x, mask=mask, h_f=h_f, h_b=h_b, states=states,
                        weights=weights, s=s, probs=probs, drop_out=drop_out)


def batch_loss(probs: np.ndarray, y: np.ndarray) -> float:
    """Mean clamped cross-entropy over the batch."""
    q = np.clip(probs.astype(np.float64), PROB_CLAMP, 1.0 - PROB_CLAMP)
    return float(-np.mean(y * np.log(q) + (1.0 - y) * np.log(1.0 - q)))


def backward_batch(params: BiGRUAttParams, cache: ForwardCache,
                   y: np.ndarray) -> BiGRUAttParams:
    """Gradients of the mean batch loss for every trainable array.

    Pure function of (params, cache, y): repeated calls return identical
    gradients. Frozen inputs get none.
    """
    dtype = params.dtype
    T, B, _ = cache.states.shape
    H = params.hidden_size
    probs = cache.probs
    active = (probs > PROB_CLAMP) & (probs < 1.0 - PROB_CLAMP)
    dlogit = ((probs - y) * active / B).astype(dtype)

    du_p = np.einsum("b,bk->k", dlogit, cache.s).astype(dtype)
    db_p = np.asarray(dlogit.sum(), dtype=dtype)
    ds = dlogit[:, None] * params.u_p[None, :]

    weights = cache.weights
    dstates = weights[:, :, None] * ds[None, :, :]
    dweights = np.einsum("bk,tbk->tb", ds, cache.states)
    wsum = np.einsum("tb,tb->b", weights, dweights)
    dscores = weights * (dweights - wsum)
    du_att = np.einsum("tb,tbk->k", dscores, cache.states).astype(dtype)
    dstates += dscores[:, :, None] * params.u_att[None, None, :]
    if cache.drop_out is not None:
        dstates = dstates * cache.drop_out

    grads = {"u_att": du_att, "u_p": du_p, "b_p": db_p}
    for prefix, cell, pack, reverse in (("fwd", params.fwd, cache.h_f, False),
                                        ("bwd", params.bwd, cache.h_b, True)):
        half = dstates[:, :, :H] if prefix == "fwd" else dstates[:, :, H:]
        h, z, r, hc = pack
        dgx, du_zr, du_h = kernels.gru_backward(
            np.ascontiguousarray(half), h, z, r, hc,
            cell.u_zr_stack(), cell.u_h, cache.mask, reverse)
        dw = dgx.reshape(T * B, 3 * H).T @ cache.x.reshape(T * B, -1)
        db = dgx.sum(axis=(0, 1))
        grads[f"{prefix}.w_z"] = dw[:H]
        grads[f"{prefix}.w_r"] = dw[H:2 * H]
        grads[f"{prefix}.w_h"] = dw[2 * H:]
        grads[f"{prefix}.u_z"] = du_zr[:H]
        grads[f"{prefix}.u_r"] = du_zr[H:]
        grads[f"{prefix}.u_h"] = du_h
        grads[f"{prefix}.b_z"] = db[:H]
        grads[f"{prefix}.b_r"] = db[H:2 * H]
        grads[f"{prefix}.b_h"] = db[2 * H:]

    out = from_named(grads)
    for name, arr in named_arrays(out):
        if not np.isfinite(arr).all():
            raise DivergenceError(f"non-finite gradient in {name}")
    return out
