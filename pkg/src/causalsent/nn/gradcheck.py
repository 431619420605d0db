"""Central finite-difference gradient checking.

The check perturbs parameters one coordinate at a time and compares
(f(x+h) - f(x-h)) / 2h against the analytic gradient, using only the
forward pass, so it is an independent oracle for the hand-written
backward pass. For large parameter arrays a random coordinate subsample
keeps the cost bounded while still covering every array.
"""

from __future__ import annotations

import numpy as np

from .params import BiGRUAttParams, named_arrays


def max_relative_error(loss_fn, params: BiGRUAttParams,
                       analytic: BiGRUAttParams, step: float = 1e-5,
                       max_coords_per_array: int | None = None,
                       rng: np.random.Generator | None = None) -> float:
    """Worst relative disagreement between finite differences and `analytic`.

    Relative error uses max(|fd|, |analytic|, 1e-5) as denominator so that
    near-zero gradients are compared absolutely at the same tolerance.
    Parameters must be float64 for the differences to be trustworthy.
    """
    if params.dtype != np.float64:
        raise ValueError("gradient checking requires float64 parameters")
    analytic_arrays = dict(named_arrays(analytic))
    worst = 0.0
    for name, arr in named_arrays(params):
        flat = arr.reshape(-1)
        n = flat.shape[0]
        coords = np.arange(n)
        if max_coords_per_array is not None and n > max_coords_per_array:
            if rng is None:
                raise ValueError("coordinate subsampling needs an rng")
            coords = rng.choice(n, size=max_coords_per_array, replace=False)
        an_flat = analytic_arrays[name].reshape(-1)
        for c in coords:
            original = flat[c]
            flat[c] = original + step
            f_plus = loss_fn(params)
            flat[c] = original - step
            f_minus = loss_fn(params)
            flat[c] = original
            fd = (f_plus - f_minus) / (2.0 * step)
            an = float(an_flat[c])
            err = abs(fd - an) / max(abs(fd), abs(an), 1e-5)
            worst = max(worst, err)
    return worst
