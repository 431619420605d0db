"""Training loop and inference for the BiGRU-attention classifier.

The schedule: Adam (lr 2e-3, betas 0.9/0.999, eps 1e-8) over shuffled
mini-batches for 100 epochs, learning rate multiplied by 0.75 every 20
epochs, global gradient norm clipped at 0.25, dropout 0.5 on the encoder's
input and output connections, validation F1 (threshold 0.5) checked every
epoch, and the parameters with the best validation F1 kept. Batch sizes
follow the per-dataset table. All randomness (init, shuffling, dropout)
derives from the run seed through fixed SeedSequence streams, so a run is
a pure function of (data, config).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ..embeddings import ContextualVectors, EmbeddingMatrix, concat_contextual, embed
from ..evaluation import PredictionSet, prf1
from ..text import tokenize
from .model import (DivergenceError, backward_batch, batch_loss, forward_batch,
                    make_dropout_mask, pad_batch)
from .optim import adam_step, clip_gradients, init_adam
from .params import BiGRUAttParams, copy_params, init_params

DATASET_BATCH_SIZES = {
    "semeval": 128,
    "causaltb": 32,
    "eventsl": 16,
    "biocausal_small": 32,
    "biocausal_large": 256,
}

HIDDEN_SIZE = 128
INFERENCE_BATCH = 256


class TrainingDiverged(RuntimeError):
    def __init__(self, epoch: int, batch: int, message: str):
        super().__init__(f"training diverged at epoch {epoch}, batch {batch}: "
                         f"{message}")
        self.epoch = epoch
        self.batch = batch


@dataclass
class TrainConfig:
    epochs: int = 100
    batch_size: int = 32
    lr0: float = 2e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    lr_decay: float = 0.75
    lr_decay_every: int = 20
    clip_norm: float = 0.25
    dropout: float = 0.5
    depth: int = 1
    hidden_size: int = HIDDEN_SIZE
    seed: int = 0
    dtype: str = "float32"

    @classmethod
    def for_dataset(cls, name: str, **overrides) -> "TrainConfig":
        """Defaults with the dataset's batch size; unknown names keep 32."""
        config = cls(batch_size=DATASET_BATCH_SIZES.get(name, 32))
        return replace(config, **overrides)

    def validate(self) -> list[str]:
        problems = []
        for name in ("epochs", "batch_size", "lr0", "lr_decay",
                     "lr_decay_every", "clip_norm", "hidden_size"):
            if getattr(self, name) <= 0:
                problems.append(f"{name} must be positive, got {getattr(self, name)}")
        if not 0.0 <= self.dropout < 1.0:
            problems.append(f"dropout must be in [0, 1), got {self.dropout}")
        if self.depth != 1:
            problems.append(f"only depth 1 is supported, got {self.depth}")
        if self.dtype not in ("float32", "float64"):
            problems.append(f"dtype must be float32 or float64, got {self.dtype}")
        return problems

    def learning_rate(self, epoch: int) -> float:
        """Stepwise-decayed rate for a 1-based epoch."""
        return self.lr0 * self.lr_decay ** ((epoch - 1) // self.lr_decay_every)

    def np_dtype(self):
        return np.dtype(self.dtype)


@dataclass
class TrainResult:
    params: BiGRUAttParams
    history: list[dict] = field(default_factory=list)
    best_epoch: int = 0
    best_val_f1: float = 0.0


def prepare_sequences(sentences, matrix: EmbeddingMatrix,
                      contextual: ContextualVectors | None = None,
                      dtype=np.float32):
    """(embedding sequences, gold labels, ids) for a sentence list."""
    seqs, golds, ids = [], [], []
    for s in sentences:
        try:
            tokens = tokenize(s.text)
        except ValueError as exc:
            raise ValueError(f"sentence {s.id!r}: {exc}") from exc
        seq = embed(matrix, tokens)
        if contextual is not None:
            if s.id not in contextual.records:
                raise ValueError(f"sentence {s.id!r}: no contextual vectors")
            seq = concat_contextual(seq, contextual.records[s.id], s.id)
        seqs.append(np.asarray(seq, dtype=dtype))
        golds.append(1 if s.is_causal else 0)
        ids.append(s.id)
    return seqs, np.array(golds, dtype=np.int8), ids


def predict_probs(params: BiGRUAttParams, seqs: list[np.ndarray],
                  batch_size: int = INFERENCE_BATCH) -> np.ndarray:
    """Dropout-free probabilities, batched in input order."""
    dtype = params.dtype
    probs = np.empty(len(seqs), dtype=np.float64)
    for start in range(0, len(seqs), batch_size):
        chunk = seqs[start:start + batch_size]
        x, mask = pad_batch([c.astype(dtype, copy=False) for c in chunk], dtype)
        cache = forward_batch(params, x, mask)
        probs[start:start + len(chunk)] = cache.probs
    return probs


def train(split, matrix: EmbeddingMatrix, config: TrainConfig,
          contextual: ContextualVectors | None = None,
          params: BiGRUAttParams | None = None) -> TrainResult:
    """Train on split.train, checkpointing on best split.validation F1."""
    problems = config.validate()
    if problems:
        raise ValueError("; ".join(problems))
    dtype = config.np_dtype()
    train_seqs, train_golds, _ = prepare_sequences(split.train, matrix,
                                                   contextual, dtype)
    val_seqs, val_golds, val_ids = prepare_sequences(split.validation, matrix,
                                                     contextual, dtype)
    if not train_seqs or not val_seqs:
        raise ValueError("empty train or validation part")
    d_in = train_seqs[0].shape[1]
    if params is None:
        params = init_params(d_in, config.hidden_size, config.seed, dtype)
    state = init_adam(params)
    shuffle_rng = np.random.default_rng(np.random.SeedSequence([config.seed, 1]))
    dropout_rng = np.random.default_rng(np.random.SeedSequence([config.seed, 2]))

    result = TrainResult(params=copy_params(params), best_epoch=0,
                         best_val_f1=-1.0)
    n = len(train_seqs)
    for epoch in range(1, config.epochs + 1):
        lr = config.learning_rate(epoch)
        order = shuffle_rng.permutation(n)
        losses = []
        for batch_no, start in enumerate(range(0, n, config.batch_size)):
            idx = order[start:start + config.batch_size]
            x, mask = pad_batch([train_seqs[i] for i in idx], dtype)
            y = train_golds[idx]
            drop_in = make_dropout_mask(dropout_rng, x.shape, config.dropout,
                                        dtype)
            drop_out = make_dropout_mask(
                dropout_rng, (x.shape[0], x.shape[1], 2 * config.hidden_size),
                config.dropout, dtype)
            try:
                cache = forward_batch(params, x, mask, drop_in, drop_out)
                loss = batch_loss(cache.probs, y)
                if not np.isfinite(loss):
                    raise DivergenceError("non-finite loss")
                grads = backward_batch(params, cache, y)
            except DivergenceError as exc:
                raise TrainingDiverged(epoch, batch_no, str(exc)) from exc
            clip_gradients(grads, config.clip_norm)
            adam_step(params, grads, state, lr, config.beta1, config.beta2,
                      config.eps)
            losses.append(loss)

        val_preds = PredictionSet(ids=val_ids,
                                  probs=predict_probs(params, val_seqs),
                                  golds=val_golds)
        val_f1 = prf1(val_preds)[2]
        result.history.append({"epoch": epoch, "lr": lr,
                               "train_loss": float(np.mean(losses)),
                               "val_f1": val_f1})
        if val_f1 > result.best_val_f1:
            result.best_val_f1 = val_f1
            result.best_epoch = epoch
            result.params = copy_params(params)
    return result


def infer(params: BiGRUAttParams, sentences, matrix: EmbeddingMatrix,
          contextual: ContextualVectors | None = None) -> PredictionSet:
    """Dropout-free predictions; hard labels are evaluation's business."""
    expected = matrix.dim + (contextual.dim if contextual is not None else 0)
    if params.input_size != expected:
        raise ValueError(f"checkpoint expects input dim {params.input_size}, "
                         f"embeddings provide {expected}")
    if not sentences:
        return PredictionSet(ids=[], probs=np.empty(0), golds=np.empty(0, dtype=np.int8))
    seqs, golds, ids = prepare_sequences(sentences, matrix, contextual,
                                         params.dtype)
    return PredictionSet(ids=ids, probs=predict_probs(params, seqs),
                         golds=golds)
