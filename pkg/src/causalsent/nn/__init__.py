"""BiGRU self-attention classifier: parameters, kernels, training."""

from .checkpoint import load_checkpoint, save_checkpoint
from .gradcheck import max_relative_error
from .kernels import BACKEND
from .model import (AttentionOutput, DivergenceError, attend, backward_batch,
                    batch_loss, bce_loss, bigru_forward, forward_batch,
                    gru_step, make_dropout_mask, pad_batch, predict_prob)
from .optim import AdamState, adam_step, clip_gradients, global_norm, init_adam
from .params import (BiGRUAttParams, GRUCellParams, copy_params, from_named,
                     init_params, named_arrays, zeros_like_params)
from .train import (DATASET_BATCH_SIZES, TrainConfig, TrainResult,
                    TrainingDiverged, infer, predict_probs, prepare_sequences,
                    train)

__all__ = [
    "BACKEND",
    "AttentionOutput", "DivergenceError", "gru_step", "bigru_forward",
    "attend", "predict_prob", "bce_loss", "pad_batch", "make_dropout_mask",
    "forward_batch", "backward_batch", "batch_loss",
    "AdamState", "init_adam", "adam_step", "clip_gradients", "global_norm",
    "GRUCellParams", "BiGRUAttParams", "init_params", "named_arrays",
    "from_named", "copy_params", "zeros_like_params",
    "TrainConfig", "TrainResult", "TrainingDiverged", "DATASET_BATCH_SIZES",
    "train", "infer", "predict_probs", "prepare_sequences",
    "save_checkpoint", "load_checkpoint", "max_relative_error",
]
