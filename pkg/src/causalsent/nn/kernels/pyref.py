"""Pure-numpy GRU sequence kernels (reference backend).

Arrays are time-major. `gx` holds the precomputed input projections plus
biases for all three gates, ordered z (update), r (reset), candidate.
Padded steps are flagged by mask=0 and carry the hidden state through
unchanged, so a reversed pass over a right-padded batch equals a pass over
the unpadded reversed sequences.
"""

from __future__ import annotations

import numpy as np


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _steps(n: int, reverse: bool) -> range:
    return range(n - 1, -1, -1) if reverse else range(n)


def gru_forward(gx: np.ndarray, u_zr: np.ndarray, u_h: np.ndarray,
                mask: np.ndarray, reverse: bool = False):
    """Run one GRU direction over a padded batch.

    gx: (T, B, 3H) input projections (+bias); mask: (T, B) 0/1 floats;
    u_zr: (2H, H) stacked recurrent weights of z and r; u_h: (H, H).
    Returns (h, z, r, hc), each (T, B, H); h[t] is the state exposed at
    position t.
    """
    T, B, H3 = gx.shape
    H = H3 // 3
    h = np.empty((T, B, H), dtype=gx.dtype)
    z_all = np.empty_like(h)
    r_all = np.empty_like(h)
    hc_all = np.empty_like(h)
    h_prev = np.zeros((B, H), dtype=gx.dtype)
    for t in _steps(T, reverse):
        zr = _sigmoid(gx[t, :, :2 * H] + h_prev @ u_zr.T)
        z = zr[:, :H]
        r = zr[:, H:]
        hc = np.tanh(gx[t, :, 2 * H:] + (r * h_prev) @ u_h.T)
        m = mask[t][:, None]
        h_t = m * ((1.0 - z) * h_prev + z * hc) + (1.0 - m) * h_prev
        z_all[t] = z
        r_all[t] = r
        hc_all[t] = hc
        h[t] = h_t
        h_prev = h_t
    return h, z_all, r_all, hc_all


def gru_backward(dh_out: np.ndarray, h: np.ndarray, z: np.ndarray,
                 r: np.ndarray, hc: np.ndarray, u_zr: np.ndarray,
                 u_h: np.ndarray, mask: np.ndarray, reverse: bool = False):
    """Backpropagate through gru_forward.

    dh_out: (T, B, H) gradient arriving at each exposed state h[t].
    Returns (dgx, du_zr, du_h); input-side gradients (dW, db) follow from
    dgx outside the kernel, and no gradient is produced for the frozen
    inputs themselves.
    """
    T, B, H = h.shape
    dgx = np.zeros((T, B, 3 * H), dtype=h.dtype)
    du_zr = np.zeros_like(u_zr)
    du_h = np.zeros_like(u_h)
    zeros = np.zeros((B, H), dtype=h.dtype)
    dh = zeros.copy()
    steps = list(_steps(T, reverse))
    for i in range(len(steps) - 1, -1, -1):
        t = steps[i]
        h_prev = h[steps[i - 1]] if i > 0 else zeros
        dh = dh + dh_out[t]
        m = mask[t][:, None]
        dh_m = m * dh
        z_t, r_t, hc_t = z[t], r[t], hc[t]
        dz = dh_m * (hc_t - h_prev)
        dhc = dh_m * z_t
        dh_prev = dh_m * (1.0 - z_t) + (1.0 - m) * dh
        dah = dhc * (1.0 - hc_t * hc_t)
        drh = dah @ u_h
        du_h += dah.T @ (r_t * h_prev)
        dh_prev += drh * r_t
        dr = drh * h_prev
        daz = dz * z_t * (1.0 - z_t)
        dar = dr * r_t * (1.0 - r_t)
        dazr = np.concatenate([daz, dar], axis=1)
        du_zr += dazr.T @ h_prev
        dh_prev += dazr @ u_zr
        dgx[t, :, :2 * H] = dazr
        dgx[t, :, 2 * H:] = dah
        dh = dh_prev
    return dgx, du_zr, du_h
