"""Metrics, multi-seed aggregation, and significance testing.

All scores are reported on a 0-100 scale. Hard labels exist only here:
models emit probabilities, and this module thresholds them (at 0.5 unless
stated otherwise). AUC-PR is the average-precision form: the ranking is
sorted by descending probability with ties broken by sentence id, and the
precision at each positive's rank is averaged over the positives. The
approximate randomization test swaps the two systems' outputs per sentence
independently with probability 0.5 and counts how often the metric gap is
at least the observed one.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

POSITIVE_THRESHOLD = 0.5
ART_ITERATIONS = 10_000
ART_SWAP_FRACTION = 0.5
SIGNIFICANCE_LEVEL = 0.05

METRIC_NAMES = ("precision", "recall", "f1", "auc_pr")


@dataclass
class PredictionSet:
    """Aligned (id, probability, gold) records for one system on one test set."""

    ids: list[str]
    probs: np.ndarray   # float64 in [0, 1]
    golds: np.ndarray   # int8 in {0, 1}

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=np.float64)
        self.golds = np.asarray(self.golds, dtype=np.int8)
        if not (len(self.ids) == len(self.probs) == len(self.golds)):
            raise ValueError("ids/probs/golds length mismatch")
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("duplicate prediction ids")
        if len(self.probs) and not np.isfinite(self.probs).all():
            raise ValueError("non-finite probabilities")
        if not np.isin(self.golds, (0, 1)).all():
            raise ValueError("gold labels must be 0 or 1")

    def __len__(self) -> int:
        return len(self.ids)

    @classmethod
    def from_records(cls, records) -> "PredictionSet":
        ids, probs, golds = [], [], []
        for sid, prob, gold in records:
            ids.append(sid)
            probs.append(prob)
            golds.append(gold)
        return cls(ids=ids, probs=np.array(probs, dtype=np.float64),
                   golds=np.array(golds, dtype=np.int8))

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for sid, prob, gold in zip(self.ids, self.probs, self.golds):
                fh.write(json.dumps({"id": sid, "prob": float(prob),
                                     "gold": int(gold)}) + "\n")

    @classmethod
    def load(cls, path) -> "PredictionSet":
        records = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    r = json.loads(line)
                    records.append((r["id"], r["prob"], r["gold"]))
        return cls.from_records(records)


@dataclass
class MetricsReport:
    precision: float
    recall: float
    f1: float
    auc_pr: float
    threshold: float = POSITIVE_THRESHOLD
    n_pos: int = 0
    n_neg: int = 0

    def to_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall,
                "f1": self.f1, "auc_pr": self.auc_pr,
                "threshold": self.threshold, "n_pos": self.n_pos,
                "n_neg": self.n_neg}


@dataclass
class RepetitionSummary:
    """Mean and sample standard deviation of each metric over repeated runs."""

    mean: dict[str, float]
    std: dict[str, float]
    runs: list[MetricsReport]

    def to_dict(self) -> dict:
        return {"mean": self.mean, "std": self.std, "n_runs": len(self.runs),
                "runs": [r.to_dict() for r in self.runs]}


@dataclass
class SignificanceResult:
    p_value: float
    metric: str
    iterations: int = ART_ITERATIONS
    swap_fraction: float = ART_SWAP_FRACTION
    note: str = "per-side run chosen by best validation F1"

    @property
    def significant(self) -> bool:
        return self.p_value <= SIGNIFICANCE_LEVEL


def _counts(probs: np.ndarray, golds: np.ndarray, threshold: float):
    predicted = probs >= threshold
    tp = int(np.sum(predicted & (golds == 1)))
    fp = int(np.sum(predicted & (golds == 0)))
    fn = int(np.sum(~predicted & (golds == 1)))
    return tp, fp, fn


def _prf1_from_counts(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    precision = 100.0 * tp / (tp + fp) if tp + fp else 0.0
    recall = 100.0 * tp / (tp + fn) if tp + fn else 0.0
    f1 = (2.0 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return precision, recall, f1


def prf1(preds: PredictionSet,
         threshold: float = POSITIVE_THRESHOLD) -> tuple[float, float, float]:
    """(precision, recall, F1) on 0-100 scale; empty denominators score 0."""
    if not len(preds):
        raise ValueError("empty prediction set")
    return _prf1_from_counts(*_counts(preds.probs, preds.golds, threshold))


def _ranked_golds(probs: np.ndarray, golds: np.ndarray,
                  id_rank: np.ndarray) -> np.ndarray:
    # lexsort: last key is primary, so sort by -prob then ascending id rank
    order = np.lexsort((id_rank, -probs))
    return golds[order]


def _average_precision(probs: np.ndarray, golds: np.ndarray,
                       id_rank: np.ndarray) -> float:
    n_pos = int(np.sum(golds == 1))
    if n_pos == 0:
        raise ValueError("no positive gold labels; AUC-PR undefined")
    ranked = _ranked_golds(probs, golds, id_rank)
    hits = ranked == 1
    tp_at_rank = np.cumsum(hits)
    ranks = np.arange(1, len(ranked) + 1)
    precisions = tp_at_rank[hits] / ranks[hits]
    return 100.0 * (math.fsum(precisions.tolist()) / n_pos)


def _id_rank(ids: list[str]) -> np.ndarray:
    order = sorted(range(len(ids)), key=lambda i: ids[i])
    rank = np.empty(len(ids), dtype=np.int64)
    for r, i in enumerate(order):
        rank[i] = r
    return rank


def auc_pr(preds: PredictionSet) -> float:
    """Area under the precision-recall curve as average precision, 0-100."""
    return _average_precision(preds.probs, preds.golds, _id_rank(preds.ids))


def metrics_report(preds: PredictionSet,
                   threshold: float = POSITIVE_THRESHOLD) -> MetricsReport:
    precision, recall, f1 = prf1(preds, threshold)
    n_pos = int(np.sum(preds.golds == 1))
    return MetricsReport(precision=precision, recall=recall, f1=f1,
                         auc_pr=auc_pr(preds), threshold=threshold,
                         n_pos=n_pos, n_neg=len(preds) - n_pos)


def aggregate(runs: list[MetricsReport]) -> RepetitionSummary:
    """Per-metric mean and sample (n-1) standard deviation over runs."""
    if len(runs) < 2:
        raise ValueError("need at least 2 runs to aggregate")
    mean: dict[str, float] = {}
    std: dict[str, float] = {}
    for name in METRIC_NAMES:
        values = np.array([getattr(r, name) for r in runs], dtype=np.float64)
        mean[name] = float(values.mean())
        std[name] = float(values.std(ddof=1))
    return RepetitionSummary(mean=mean, std=std, runs=list(runs))


def _metric_fn(name: str):
    if name in ("precision", "recall", "f1"):
        idx = ("precision", "recall", "f1").index(name)

        def fn(probs, golds, id_rank):
            return _prf1_from_counts(*_counts(probs, golds, POSITIVE_THRESHOLD))[idx]

        return fn
    if name == "auc_pr":
        return _average_precision
    raise ValueError(f"unknown metric {name!r} (use one of "
                     f"{', '.join(METRIC_NAMES)})")


def _aligned_arrays(preds_a: PredictionSet, preds_b: PredictionSet):
    if sorted(preds_a.ids) != sorted(preds_b.ids):
        raise ValueError("prediction sets cover different sentence ids")
    index_b = {sid: i for i, sid in enumerate(preds_b.ids)}
    order_b = np.array([index_b[sid] for sid in preds_a.ids], dtype=np.int64)
    golds_b = preds_b.golds[order_b]
    if not np.array_equal(preds_a.golds, golds_b):
        raise ValueError("prediction sets disagree on gold labels")
    return preds_a.probs.copy(), preds_b.probs[order_b].copy(), \
        preds_a.golds.copy(), _id_rank(preds_a.ids)


def approx_randomization(preds_a: PredictionSet, preds_b: PredictionSet,
                         metric: str = "auc_pr",
                         iterations: int = ART_ITERATIONS,
                         swap_fraction: float = ART_SWAP_FRACTION,
                         seed: int = 0) -> SignificanceResult:
    """Two-tailed approximate randomization test on a paired test set.

    Each iteration swaps the two systems' outputs on each sentence
    independently with probability `swap_fraction` and recomputes the
    absolute metric difference. Iteration i draws from a generator seeded
    with SeedSequence([seed, i]), so iterations can be computed in any
    order (or in parallel) with identical results. The p-value uses
    add-one smoothing: (count + 1) / (iterations + 1).
    """
    pa, pb, golds, id_rank = _aligned_arrays(preds_a, preds_b)
    fn = _metric_fn(metric)
    observed = abs(fn(pa, golds, id_rank) - fn(pb, golds, id_rank))
    n = len(golds)
    count = 0
    for i in range(iterations):
        rng = np.random.default_rng(np.random.SeedSequence([seed, i]))
        swap = rng.random(n) < swap_fraction
        sa = np.where(swap, pb, pa)
        sb = np.where(swap, pa, pb)
        delta = abs(fn(sa, golds, id_rank) - fn(sb, golds, id_rank))
        if delta >= observed:
            count += 1
    return SignificanceResult(p_value=(count + 1) / (iterations + 1),
                              metric=metric, iterations=iterations,
                              swap_fraction=swap_fraction)


def select_best_run(runs):
    """The run with the highest validation F1; ties go to the lowest seed.

    Items must expose `.val_f1` and `.seed` attributes.
    """
    runs = list(runs)
    if not runs:
        raise ValueError("no runs to select from")
    return max(runs, key=lambda r: (r.val_f1, -r.seed))
