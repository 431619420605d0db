# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled GRU sequence kernels.

Same contract as the numpy reference backend (kernels.pyref): time-major
padded batches, mask-carried states, gate order z/r/candidate. The
recurrent matmuls go through BLAS; the gate math runs in fused C loops.
"""

import numpy as np

from libc.math cimport exp, tanh
from libc.string cimport memcpy, memset
from scipy.linalg.cython_blas cimport dgemm, sgemm

ctypedef fused floating:
    float
    double


cdef inline floating _sigmoid(floating x) noexcept nogil:
    cdef floating e
    if x >= 0:
        return 1.0 / (1.0 + exp(-x))
    e = exp(x)
    return e / (1.0 + e)


# Row-major gemm wrappers: lda/ldb/ldc are row strides of A/B/C.

cdef inline void _gemm_nt(int M, int N, int K, floating alpha,
                          floating* A, int lda, floating* B, int ldb,
                          floating beta, floating* C, int ldc) noexcept nogil:
    # C(M,N) = alpha * A(M,K) @ B(N,K)^T + beta * C
    cdef char ta = b'T', tb = b'N'
    cdef int m = N, n = M, k = K
    if floating is float:
        sgemm(&ta, &tb, &m, &n, &k, &alpha, B, &ldb, A, &lda, &beta, C, &ldc)
    else:
        dgemm(&ta, &tb, &m, &n, &k, &alpha, B, &ldb, A, &lda, &beta, C, &ldc)


cdef inline void _gemm_nn(int M, int N, int K, floating alpha,
                          floating* A, int lda, floating* B, int ldb,
                          floating beta, floating* C, int ldc) noexcept nogil:
    # C(M,N) = alpha * A(M,K) @ B(K,N) + beta * C
    cdef char ta = b'N', tb = b'N'
    cdef int m = N, n = M, k = K
    if floating is float:
        sgemm(&ta, &tb, &m, &n, &k, &alpha, B, &ldb, A, &lda, &beta, C, &ldc)
    else:
        dgemm(&ta, &tb, &m, &n, &k, &alpha, B, &ldb, A, &lda, &beta, C, &ldc)


cdef inline void _gemm_tn(int M, int N, int K, floating alpha,
                          floating* A, int lda, floating* B, int ldb,
                          floating beta, floating* C, int ldc) noexcept nogil:
    # C(M,N) = alpha * A(K,M)^T @ B(K,N) + beta * C
    cdef char ta = b'N', tb = b'T'
    cdef int m = N, n = M, k = K
    if floating is float:
        sgemm(&ta, &tb, &m, &n, &k, &alpha, B, &ldb, A, &lda, &beta, C, &ldc)
    else:
        dgemm(&ta, &tb, &m, &n, &k, &alpha, B, &ldb, A, &lda, &beta, C, &ldc)


def gru_forward(floating[:, :, ::1] gx, floating[:, ::1] u_zr,
                floating[:, ::1] u_h, floating[:, ::1] mask,
                bint reverse=False):
    """Run one GRU direction over a padded batch; see kernels.pyref."""
    cdef int T = gx.shape[0], B = gx.shape[1], H = gx.shape[2] // 3
    dtype = np.float32 if floating is float else np.float64
    h_arr = np.empty((T, B, H), dtype=dtype)
    z_arr = np.empty((T, B, H), dtype=dtype)
    r_arr = np.empty((T, B, H), dtype=dtype)
    hc_arr = np.empty((T, B, H), dtype=dtype)
    azr_arr = np.empty((B, 2 * H), dtype=dtype)
    rh_arr = np.empty((B, H), dtype=dtype)
    ah_arr = np.empty((B, H), dtype=dtype)
    zeros_arr = np.zeros((B, H), dtype=dtype)

    cdef floating[:, :, ::1] h = h_arr, z = z_arr, r = r_arr, hc = hc_arr
    cdef floating[:, ::1] azr = azr_arr, rh = rh_arr, ah = ah_arr
    cdef floating[:, ::1] zeros = zeros_arr
    cdef floating* hprev
    cdef floating zv, rv, hv, hp, mv
    cdef int idx, t, b, j

    with nogil:
        hprev = &zeros[0, 0]
        for idx in range(T):
            t = T - 1 - idx if reverse else idx
            for b in range(B):
                memcpy(&azr[b, 0], &gx[t, b, 0], 2 * H * sizeof(floating))
            _gemm_nt(B, 2 * H, H, <floating>1.0, hprev, H, &u_zr[0, 0], H,
                     <floating>1.0, &azr[0, 0], 2 * H)
            for b in range(B):
                for j in range(H):
                    zv = _sigmoid(azr[b, j])
                    rv = _sigmoid(azr[b, H + j])
                    z[t, b, j] = zv
                    r[t, b, j] = rv
                    rh[b, j] = rv * hprev[b * H + j]
                    ah[b, j] = gx[t, b, 2 * H + j]
            _gemm_nt(B, H, H, <floating>1.0, &rh[0, 0], H, &u_h[0, 0], H,
                     <floating>1.0, &ah[0, 0], H)
            for b in range(B):
                mv = mask[t, b]
                for j in range(H):
                    hv = tanh(ah[b, j])
                    hc[t, b, j] = hv
                    zv = z[t, b, j]
                    hp = hprev[b * H + j]
                    h[t, b, j] = mv * ((1.0 - zv) * hp + zv * hv) + (1.0 - mv) * hp
            hprev = &h[t, 0, 0]
    return h_arr, z_arr, r_arr, hc_arr


def gru_backward(floating[:, :, ::1] dh_out, floating[:, :, ::1] h,
                 floating[:, :, ::1] z, floating[:, :, ::1] r,
                 floating[:, :, ::1] hc, floating[:, ::1] u_zr,
                 floating[:, ::1] u_h, floating[:, ::1] mask,
                 bint reverse=False):
    """Backpropagate through gru_forward; see kernels.pyref."""
    cdef int T = h.shape[0], B = h.shape[1], H = h.shape[2]
    dtype = np.float32 if floating is float else np.float64
    dgx_arr = np.zeros((T, B, 3 * H), dtype=dtype)
    du_zr_arr = np.zeros((2 * H, H), dtype=dtype)
    du_h_arr = np.zeros((H, H), dtype=dtype)
    dh_arr = np.zeros((B, H), dtype=dtype)
    dhp_arr = np.empty((B, H), dtype=dtype)
    drh_arr = np.empty((B, H), dtype=dtype)
    rh_arr = np.empty((B, H), dtype=dtype)
    zeros_arr = np.zeros((B, H), dtype=dtype)

    cdef floating[:, :, ::1] dgx = dgx_arr
    cdef floating[:, ::1] du_zr = du_zr_arr, du_h = du_h_arr
    cdef floating[:, ::1] dh = dh_arr, dhp = dhp_arr, drh = drh_arr
    cdef floating[:, ::1] rh = rh_arr, zeros = zeros_arr
    cdef floating* hprev
    cdef floating dht, dhm, zv, rv, hv, hp, mv, dz, dhc, dahv, dr
    cdef int idx, t, tp, b, j

    with nogil:
        # iterate the forward step order backwards
        for idx in range(T - 1, -1, -1):
            t = T - 1 - idx if reverse else idx
            tp = t + 1 if reverse else t - 1
            if 0 <= tp < T:
                hprev = &h[tp, 0, 0]
            else:
                hprev = &zeros[0, 0]
            for b in range(B):
                mv = mask[t, b]
                for j in range(H):
                    dht = dh[b, j] + dh_out[t, b, j]
                    dhm = mv * dht
                    zv = z[t, b, j]
                    rv = r[t, b, j]
                    hv = hc[t, b, j]
                    hp = hprev[b * H + j]
                    dz = dhm * (hv - hp)
                    dhc = dhm * zv
                    dhp[b, j] = dhm * (1.0 - zv) + (1.0 - mv) * dht
                    dahv = dhc * (1.0 - hv * hv)
                    dgx[t, b, 2 * H + j] = dahv
                    rh[b, j] = rv * hp
                    dgx[t, b, j] = dz * zv * (1.0 - zv)
            # drh = dah @ u_h ; du_h += dah^T @ (r * h_prev)
            _gemm_nn(B, H, H, <floating>1.0, &dgx[t, 0, 2 * H], 3 * H,
                     &u_h[0, 0], H, <floating>0.0, &drh[0, 0], H)
            _gemm_tn(H, H, B, <floating>1.0, &dgx[t, 0, 2 * H], 3 * H,
                     &rh[0, 0], H, <floating>1.0, &du_h[0, 0], H)
            for b in range(B):
                for j in range(H):
                    rv = r[t, b, j]
                    hp = hprev[b * H + j]
                    dhp[b, j] += drh[b, j] * rv
                    dr = drh[b, j] * hp
                    dgx[t, b, H + j] = dr * rv * (1.0 - rv)
            # du_zr += dazr^T @ h_prev ; dh_prev += dazr @ u_zr
            _gemm_tn(2 * H, H, B, <floating>1.0, &dgx[t, 0, 0], 3 * H,
                     hprev, H, <floating>1.0, &du_zr[0, 0], H)
            _gemm_nn(B, H, 2 * H, <floating>1.0, &dgx[t, 0, 0], 3 * H,
                     &u_zr[0, 0], H, <floating>1.0, &dhp[0, 0], H)
            memcpy(&dh[0, 0], &dhp[0, 0], B * H * sizeof(floating))
    return dgx_arr, du_zr_arr, du_h_arr
