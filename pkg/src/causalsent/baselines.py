"""Logistic regression over tf-idf n-gram features.

The solver is deterministic full-batch gradient descent with Armijo
backtracking on the objective

    mean cross-entropy + (l2/2) * ||w||^2        (bias unregularized)

starting from zero weights, stopping when the gradient norm drops below
`tol` or after `max_iters` steps. With L2-normalized features and mean
loss, an l2 of roughly 1/n_train matches the common sum-loss toolkit
default; `auto` selects that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from . import binio
from .text import SparseVector, TfidfModel

_BUNDLE_MAGIC = b"LRNB"
_BUNDLE_VERSION = 1

DEFAULT_L2 = 1.0
DEFAULT_MAX_ITERS = 2000
DEFAULT_TOL = 1e-5


@dataclass
class LinearModel:
    weights: np.ndarray   # float64, one per tf-idf column
    bias: float
    l2_strength: float


def _to_csr(vectors: list[SparseVector], n_features: int) -> sparse.csr_matrix:
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    for i, vec in enumerate(vectors):
        if len(vec.indices) and vec.indices[-1] >= n_features:
            raise ValueError(f"feature index {vec.indices[-1]} out of range "
                             f"for {n_features} columns")
        indptr[i + 1] = indptr[i] + len(vec.indices)
    indices = (np.concatenate([v.indices for v in vectors])
               if vectors else np.empty(0, dtype=np.int64))
    data = (np.concatenate([v.values for v in vectors])
            if vectors else np.empty(0, dtype=np.float64))
    return sparse.csr_matrix((data, indices, indptr),
                             shape=(len(vectors), n_features))


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _objective(matrix, y, w, b, l2) -> float:
    z = matrix @ w + b
    # stable mean binary cross-entropy: max(z,0) - z*y + log(1 + exp(-|z|))
    losses = np.maximum(z, 0.0) - z * y + np.log1p(np.exp(-np.abs(z)))
    return float(losses.mean() + 0.5 * l2 * (w @ w))


def _gradient(matrix, y, w, b, l2):
    residual = _sigmoid(matrix @ w + b) - y
    grad_w = matrix.T @ residual / len(y) + l2 * w
    grad_b = float(residual.mean())
    return grad_w, grad_b


def fit_lr(train: list[tuple[SparseVector, int]], l2: float = DEFAULT_L2,
           max_iters: int = DEFAULT_MAX_ITERS,
           tol: float = DEFAULT_TOL,
           n_features: int | None = None) -> LinearModel:
    """Fit the regularized logistic regression on (vector, {0,1} label) pairs."""
    if not train:
        raise ValueError("empty training set")
    y = np.array([label for _, label in train], dtype=np.float64)
    if y.min() == y.max():
        raise ValueError("training set contains a single class")
    vectors = [vec for vec, _ in train]
    if n_features is None:
        n_features = max((int(v.indices[-1]) + 1 for v in vectors
                          if len(v.indices)), default=0)
    matrix = _to_csr(vectors, n_features)

    w = np.zeros(n_features, dtype=np.float64)
    b = 0.0
    f = _objective(matrix, y, w, b, l2)
    step = 1.0
    for _ in range(max_iters):
        grad_w, grad_b = _gradient(matrix, y, w, b, l2)
        grad_sq = float(grad_w @ grad_w) + grad_b * grad_b
        if math.sqrt(grad_sq) < tol:
            break
        step = min(step * 2.0, 1e6)  # warm-started Armijo backtracking
        while step >= 1e-18:
            w_new = w - step * grad_w
            b_new = b - step * grad_b
            f_new = _objective(matrix, y, w_new, b_new, l2)
            if f_new <= f - 1e-4 * step * grad_sq:
                break
            step *= 0.5
        else:
            break  # no descent step representable; stop here
        w, b, f = w_new, b_new, f_new
    return LinearModel(weights=w, bias=b, l2_strength=l2)


def predict_lr(model: LinearModel, vec: SparseVector) -> float:
    """P(causal) = sigmoid(w . v + b)."""
    if len(vec.indices) and vec.indices[-1] >= len(model.weights):
        raise ValueError(f"feature index {vec.indices[-1]} out of range for "
                         f"model with {len(model.weights)} weights")
    z = float(model.weights[vec.indices] @ vec.values) + model.bias
    return float(_sigmoid(np.array([z]))[0])


def save_bundle(path, tfidf: TfidfModel, model: LinearModel) -> None:
    """One versioned file holding the tf-idf vocabulary and the classifier."""
    if len(model.weights) != len(tfidf.vocabulary):
        raise ValueError("weight vector does not match tf-idf vocabulary size")

    def _write(fh):
        fh.write(_BUNDLE_MAGIC)
        binio.write_u32(fh, _BUNDLE_VERSION)
        binio.write_json(fh, {"bias": model.bias, "l2": model.l2_strength,
                              "doc_count": tfidf.doc_count,
                              "ngram_orders": list(tfidf.ngram_orders)})
        grams = sorted(tfidf.vocabulary, key=tfidf.vocabulary.get)
        binio.write_str(fh, "\n".join(grams))
        binio.write_array(fh, tfidf.idf.astype(np.float64))
        binio.write_array(fh, model.weights.astype(np.float64))

    binio.atomic_write(path, _write)


def load_bundle(path) -> tuple[TfidfModel, LinearModel]:
    with open(path, "rb") as fh:
        binio.check_magic(fh, _BUNDLE_MAGIC, "baseline bundle")
        version = binio.read_u32(fh)
        if version != _BUNDLE_VERSION:
            raise binio.FormatError(f"unsupported bundle version {version}")
        meta = binio.read_json(fh)
        grams = binio.read_str(fh)
        vocabulary = {g: i for i, g in enumerate(grams.split("\n"))} if grams else {}
        idf = binio.read_array(fh, np.float64)
        weights = binio.read_array(fh, np.float64)
    tfidf = TfidfModel(vocabulary=vocabulary, idf=idf,
                       doc_count=int(meta["doc_count"]),
                       ngram_orders=tuple(meta["ngram_orders"]))
    model = LinearModel(weights=weights, bias=float(meta["bias"]),
                        l2_strength=float(meta["l2"]))
    return tfidf, model
