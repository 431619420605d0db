"""Negative subsampling and stratified splitting.

Both operations are pure functions of (input, seed): they use a dedicated
PCG64 generator and never touch global random state.
"""

from __future__ import annotations

import math

import numpy as np

from .records import CorpusSplit, LabeledSentence

DEFAULT_RATIOS = (0.70, 0.15, 0.15)
DEFAULT_SEED = 13


def subsample_negatives(sentences: list[LabeledSentence], target: int,
                        seed: int) -> list[LabeledSentence]:
    """Keep all causal sentences and a uniform sample of `target` negatives.

    The original relative order of the kept sentences is preserved.
    """
    negative_positions = [i for i, s in enumerate(sentences) if not s.is_causal]
    if target > len(negative_positions):
        raise ValueError(f"target {target} exceeds available negatives "
                         f"({len(negative_positions)})")
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(negative_positions), size=target, replace=False)
    keep = {negative_positions[i] for i in chosen}
    return [s for i, s in enumerate(sentences) if s.is_causal or i in keep]


def _validate_ratios(ratios) -> tuple[float, float, float]:
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) != 3 or any(r <= 0 for r in ratios):
        raise ValueError(f"need three positive ratios, got {ratios}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got {ratios}")
    return ratios


def stratified_split(sentences: list[LabeledSentence], ratios=DEFAULT_RATIOS,
                     seed: int = DEFAULT_SEED) -> CorpusSplit:
    """Seeded per-class split preserving class proportions in every part.

    Each class is shuffled independently, then allocated floor(ratio * n)
    sentences to train and validation with the remainder going to test, so
    per-part class counts stay within one sentence of exact proportionality.
    Output lists keep the original corpus order.
    """
    ratios = _validate_ratios(ratios)
    by_class: dict[bool, list[int]] = {True: [], False: []}
    for i, s in enumerate(sentences):
        by_class[s.is_causal].append(i)
    for is_causal, positions in by_class.items():
        if len(positions) < 3:
            raise ValueError(
                f"class {'causal' if is_causal else 'non_causal'} has only "
                f"{len(positions)} sentences; cannot populate all three splits")

    rng = np.random.default_rng(seed)
    assignments: list[list[int]] = [[], [], []]
    for is_causal in (True, False):  # fixed draw order: causal class first
        positions = by_class[is_causal]
        shuffled = [positions[j] for j in rng.permutation(len(positions))]
        n = len(positions)
        n_train = math.floor(ratios[0] * n)
        n_val = math.floor(ratios[1] * n)
        assignments[0].extend(shuffled[:n_train])
        assignments[1].extend(shuffled[n_train:n_train + n_val])
        assignments[2].extend(shuffled[n_train + n_val:])

    parts = [[sentences[i] for i in sorted(part)] for part in assignments]
    return CorpusSplit(train=parts[0], validation=parts[1], test=parts[2],
                       seed=seed, ratios=ratios)
