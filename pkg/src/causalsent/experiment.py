"""Experiment configuration and run orchestration for the CLI.

A config file is flat ``key = value`` text (# comments allowed). Required
keys: dataset, data (a split directory), model, and embeddings for the
neural models. Everything else falls back to the per-dataset training
defaults. Each repetition k trains with seed seed_base + k and writes

    <output_dir>/runs/<seed>/{checkpoint.bin, history.jsonl, metrics.json}

Evaluation later adds predictions.jsonl and test_metrics.json per run plus
summary.json and table.txt at the top level. No artifact embeds timestamps,
so reruns with identical inputs are byte-identical.
"""

from __future__ import annotations

import dataclasses
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import baselines, evaluation, text
from .corpus import CorpusSplit, read_split
from .embeddings import load_word2vec, read_contextual
from .evaluation import PredictionSet, metrics_report
from .nn import checkpoint as nn_checkpoint
from .nn.train import TrainConfig, infer, train

MODELS = ("bigruatt", "bigruatt_ctx", "lr_ngrams")
RUNS_SUBDIR = "runs"

_TRAIN_KEYS = {"epochs": int, "batch_size": int, "lr0": float, "beta1": float,
               "beta2": float, "eps": float, "lr_decay": float,
               "lr_decay_every": int, "clip_norm": float, "dropout": float,
               "hidden_size": int, "dtype": str}
_LR_KEYS = {"lr_l2": str, "lr_max_iters": int, "lr_tol": float}
_TOP_KEYS = {"dataset": str, "data": str, "model": str, "embeddings": str,
             "embeddings_format": str, "contextual": str, "repetitions": int,
             "seed_base": int, "output_dir": str, "workers": int}


class ConfigError(ValueError):
    """One or more invalid experiment-config entries (all listed)."""

    def __init__(self, problems: list[str]):
        super().__init__("invalid config:\n  " + "\n  ".join(problems))
        self.problems = problems


@dataclass
class ExperimentConfig:
    dataset: str
    data: str
    model: str
    embeddings: str | None = None
    embeddings_format: str = "text"
    contextual: str | None = None
    repetitions: int = 10
    seed_base: int = 1
    output_dir: str = "runs"
    workers: int = 1
    train: TrainConfig = dataclasses.field(default_factory=TrainConfig)
    lr_l2: str = "auto"
    lr_max_iters: int = baselines.DEFAULT_MAX_ITERS
    lr_tol: float = baselines.DEFAULT_TOL

    def runs_dir(self) -> Path:
        return Path(self.output_dir) / RUNS_SUBDIR

    def seeds(self) -> list[int]:
        return [self.seed_base + k for k in range(self.repetitions)]


def _parse_kv(path) -> dict[str, str]:
    entries: dict[str, str] = {}
    problems: list[str] = []
    for line_no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(),
                                  start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            problems.append(f"line {line_no}: expected key = value, got {raw!r}")
            continue
        key, value = (part.strip() for part in line.split("=", 1))
        if key in entries:
            problems.append(f"line {line_no}: duplicate key {key!r}")
        entries[key] = value
    if problems:
        raise ConfigError(problems)
    return entries


def load_config(path) -> ExperimentConfig:
    """Parse and fully validate a config file, reporting every problem."""
    entries = _parse_kv(path)
    problems: list[str] = []
    known = set(_TOP_KEYS) | set(_TRAIN_KEYS) | set(_LR_KEYS)
    for key in entries:
        if key not in known:
            problems.append(f"unknown key {key!r}")

    def take(key, cast, default=None):
        if key not in entries:
            return default
        try:
            return cast(entries[key])
        except ValueError:
            problems.append(f"{key}: cannot parse {entries[key]!r} as "
                            f"{cast.__name__}")
            return default

    for required in ("dataset", "data", "model"):
        if required not in entries:
            problems.append(f"missing required key {required!r}")

    model = entries.get("model", "")
    if model and model not in MODELS:
        problems.append(f"model must be one of {MODELS}, got {model!r}")

    train_overrides = {key: take(key, cast) for key, cast in _TRAIN_KEYS.items()
                       if key in entries}
    train_config = TrainConfig.for_dataset(entries.get("dataset", ""),
                                           **train_overrides)
    for problem in train_config.validate():
        problems.append(f"train: {problem}")

    default_reps = 1 if model == "lr_ngrams" else 10
    config = ExperimentConfig(
        dataset=entries.get("dataset", ""),
        data=entries.get("data", ""),
        model=model,
        embeddings=entries.get("embeddings"),
        embeddings_format=take("embeddings_format", str, "text"),
        contextual=entries.get("contextual"),
        repetitions=take("repetitions", int, default_reps),
        seed_base=take("seed_base", int, 1),
        output_dir=take("output_dir", str, "runs"),
        workers=take("workers", int, 1),
        train=train_config,
        lr_l2=take("lr_l2", str, "auto"),
        lr_max_iters=take("lr_max_iters", int, baselines.DEFAULT_MAX_ITERS),
        lr_tol=take("lr_tol", float, baselines.DEFAULT_TOL),
    )

    if config.repetitions is None or config.repetitions < 1:
        problems.append(f"repetitions must be >= 1, got {config.repetitions}")
    if config.workers is None or config.workers < 1:
        problems.append(f"workers must be >= 1, got {config.workers}")
    if config.embeddings_format not in ("text", "binary"):
        problems.append(f"embeddings_format must be text or binary, got "
                        f"{config.embeddings_format!r}")
    if config.data and not (Path(config.data) / "manifest.json").exists():
        problems.append(f"data: {config.data!r} is not a split directory "
                        f"(no manifest.json)")
    if model in ("bigruatt", "bigruatt_ctx"):
        if not config.embeddings:
            problems.append(f"model {model} requires an embeddings path")
        elif not Path(config.embeddings).exists():
            problems.append(f"embeddings: no such file {config.embeddings!r}")
    if model == "bigruatt_ctx":
        if not config.contextual:
            problems.append("model bigruatt_ctx requires a contextual path")
        elif not Path(config.contextual).exists():
            problems.append(f"contextual: no such file {config.contextual!r}")
    if config.lr_l2 != "auto":
        try:
            if float(config.lr_l2) <= 0:
                problems.append(f"lr_l2 must be positive or 'auto', got {config.lr_l2}")
        except ValueError:
            problems.append(f"lr_l2 must be a float or 'auto', got {config.lr_l2!r}")

    if problems:
        raise ConfigError(problems)
    return config


# ---------------------------------------------------------------------------
# training runs
# ---------------------------------------------------------------------------

def _write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def _gold_pairs(split: CorpusSplit, tfidf, part) -> list:
    return [(text.transform(tfidf, text.tokenize(s.text)),
             1 if s.is_causal else 0) for s in part]


def _train_lr(config: ExperimentConfig, split: CorpusSplit, seed: int,
              run_dir: Path) -> dict:
    tokenized = [text.tokenize(s.text) for s in split.train]
    tfidf = text.fit_tfidf(tokenized)
    l2 = (1.0 / len(split.train) if config.lr_l2 == "auto"
          else float(config.lr_l2))
    model = baselines.fit_lr(_gold_pairs(split, tfidf, split.train), l2=l2,
                             max_iters=config.lr_max_iters, tol=config.lr_tol,
                             n_features=len(tfidf.vocabulary))
    baselines.save_bundle(run_dir / "checkpoint.bin", tfidf, model)
    val_preds = PredictionSet(
        ids=[s.id for s in split.validation],
        probs=np.array([baselines.predict_lr(model, vec) for vec, _ in
                        _gold_pairs(split, tfidf, split.validation)]),
        golds=np.array([1 if s.is_causal else 0 for s in split.validation],
                       dtype=np.int8))
    val_f1 = evaluation.prf1(val_preds)[2]
    history = [{"l2": l2, "val_f1": val_f1,
                "n_features": len(tfidf.vocabulary)}]
    return {"val_f1": val_f1, "best_epoch": None, "history": history}


def _train_neural(config: ExperimentConfig, split: CorpusSplit, seed: int,
                  run_dir: Path, shared: dict) -> dict:
    matrix = shared["matrix"]
    contextual = shared.get("contextual")
    train_config = dataclasses.replace(config.train, seed=seed)
    result = train(split, matrix, train_config, contextual=contextual)
    meta = {"seed": seed, "dataset": config.dataset, "model": config.model,
            "embeddings": config.embeddings,
            "embeddings_format": config.embeddings_format,
            "contextual_path": config.contextual,
            "contextual": config.model == "bigruatt_ctx",
            "val_f1": result.best_val_f1, "best_epoch": result.best_epoch,
            "train_config": dataclasses.asdict(train_config)}
    nn_checkpoint.save_checkpoint(run_dir / "checkpoint.bin", result.params, meta)
    return {"val_f1": result.best_val_f1, "best_epoch": result.best_epoch,
            "history": result.history}


def _load_shared(config: ExperimentConfig) -> dict:
    shared: dict = {"split": read_split(config.data)}
    if config.model in ("bigruatt", "bigruatt_ctx"):
        shared["matrix"] = load_word2vec(config.embeddings,
                                         config.embeddings_format)
    if config.model == "bigruatt_ctx":
        shared["contextual"] = read_contextual(config.contextual)
    return shared


def train_one_run(config: ExperimentConfig, seed: int,
                  shared: dict | None = None) -> dict:
    """Train a single repetition and write its three run artifacts."""
    if shared is None:
        shared = _load_shared(config)
    split = shared["split"]
    run_dir = config.runs_dir() / str(seed)
    run_dir.mkdir(parents=True, exist_ok=True)
    if config.model == "lr_ngrams":
        outcome = _train_lr(config, split, seed, run_dir)
    else:
        outcome = _train_neural(config, split, seed, run_dir, shared)
    with open(run_dir / "history.jsonl", "w", encoding="utf-8") as fh:
        for row in outcome["history"]:
            fh.write(json.dumps(row, sort_keys=True) + "\n")
    metrics = {"seed": seed, "model": config.model, "dataset": config.dataset,
               "val_f1": outcome["val_f1"], "best_epoch": outcome["best_epoch"]}
    _write_json(run_dir / "metrics.json", metrics)
    return metrics


def run_training(config: ExperimentConfig) -> list[dict]:
    """Run every repetition (optionally in parallel); returns per-run metrics."""
    seeds = config.seeds()
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(train_one_run, config, seed)
                       for seed in seeds]
            results = [f.result() for f in futures]
        return sorted(results, key=lambda m: m["seed"])
    shared = _load_shared(config)
    return [train_one_run(config, seed, shared) for seed in seeds]


# ---------------------------------------------------------------------------
# evaluation of trained runs
# ---------------------------------------------------------------------------

def _is_lr_bundle(path: Path) -> bool:
    with open(path, "rb") as fh:
        return fh.read(4) == b"LRNB"


def _predict_with_checkpoint(ckpt_path: Path, sentences, embeddings_path=None,
                             embeddings_format=None, contextual_path=None):
    if _is_lr_bundle(ckpt_path):
        tfidf, model = baselines.load_bundle(ckpt_path)
        records = []
        for s in sentences:
            vec = text.transform(tfidf, text.tokenize(s.text))
            records.append((s.id, baselines.predict_lr(model, vec),
                            1 if s.is_causal else 0))
        return PredictionSet.from_records(records)
    params, meta = nn_checkpoint.load_checkpoint(ckpt_path)
    emb_path = embeddings_path or meta.get("embeddings")
    emb_format = embeddings_format or meta.get("embeddings_format", "text")
    if not emb_path or not Path(emb_path).exists():
        raise FileNotFoundError(
            f"{ckpt_path}: embeddings not found at {emb_path!r}; pass an "
            f"explicit embeddings path")
    matrix = load_word2vec(emb_path, emb_format)
    contextual = None
    if meta.get("contextual"):
        ctx_path = contextual_path or meta.get("contextual_path")
        if not ctx_path or not Path(ctx_path).exists():
            raise FileNotFoundError(
                f"{ckpt_path}: contextual vectors not found at {ctx_path!r}")
        contextual = read_contextual(ctx_path)
    return infer(params, sentences, matrix, contextual)


def discover_run_dirs(path) -> list[Path]:
    """Per-seed run directories under an output dir (or the runs dir itself)."""
    path = Path(path)
    roots = [path / RUNS_SUBDIR, path]
    for root in roots:
        if root.is_dir():
            runs = sorted((d for d in root.iterdir()
                           if d.is_dir() and (d / "metrics.json").exists()),
                          key=lambda d: int(d.name) if d.name.isdigit() else 0)
            if runs:
                return runs
    raise FileNotFoundError(f"no run directories with metrics.json under {path}")


def evaluate_runs(runs_path, split: CorpusSplit, embeddings_path=None,
                  embeddings_format=None, contextual_path=None) -> dict:
    """Infer + score every run on the test part; write summary artifacts."""
    run_dirs = discover_run_dirs(runs_path)
    reports = []
    per_run = []
    for run_dir in run_dirs:
        ckpt = run_dir / "checkpoint.bin"
        if not ckpt.exists():
            raise FileNotFoundError(f"missing checkpoint: {ckpt}")
        preds = _predict_with_checkpoint(ckpt, split.test, embeddings_path,
                                         embeddings_format, contextual_path)
        preds.save(run_dir / "predictions.jsonl")
        report = metrics_report(preds)
        _write_json(run_dir / "test_metrics.json", report.to_dict())
        reports.append(report)
        run_metrics = json.loads((run_dir / "metrics.json").read_text())
        per_run.append({"seed": run_metrics["seed"],
                        "val_f1": run_metrics["val_f1"], **report.to_dict()})

    if len(reports) >= 2:
        summary = evaluation.aggregate(reports)
        mean, std = summary.mean, summary.std
    else:
        mean = {k: getattr(reports[0], k) for k in evaluation.METRIC_NAMES}
        std = {k: 0.0 for k in evaluation.METRIC_NAMES}
    out = {"n_runs": len(reports), "mean": mean, "std": std, "runs": per_run}
    root = run_dirs[0].parent.parent
    _write_json(root / "summary.json", out)
    (root / "table.txt").write_text(format_table(out), encoding="utf-8")
    return out


def format_table(summary: dict) -> str:
    """Mean +/- std row over F1 / P / R / AUC, like the reported tables."""
    order = [("F1", "f1"), ("P", "precision"), ("R", "recall"),
             ("AUC", "auc_pr")]
    header = "".join(f"{label:>16}" for label, _ in order)
    cells = "".join(
        f"{summary['mean'][key]:10.2f} ±{summary['std'][key]:4.2f}"
        for _, key in order)
    return (f"runs: {summary['n_runs']}\n"
            f"{'':>6}{header}\n"
            f"{'score':>6}{cells}\n")


# ---------------------------------------------------------------------------
# significance testing between two run directories
# ---------------------------------------------------------------------------

@dataclass
class RunInfo:
    seed: int
    val_f1: float
    run_dir: Path


def _load_run_infos(path) -> list[RunInfo]:
    infos = []
    for run_dir in discover_run_dirs(path):
        metrics = json.loads((run_dir / "metrics.json").read_text())
        if not (run_dir / "predictions.jsonl").exists():
            raise FileNotFoundError(f"{run_dir}: no predictions.jsonl "
                                    f"(run `causalsent eval` first)")
        infos.append(RunInfo(seed=int(metrics["seed"]),
                             val_f1=float(metrics["val_f1"]),
                             run_dir=run_dir))
    return infos


def significance(path_a, path_b, metric: str = "auc_pr", seed: int = 0,
                 iterations: int = evaluation.ART_ITERATIONS):
    """Best-validation-run ART comparison between two experiment outputs."""
    best_a = evaluation.select_best_run(_load_run_infos(path_a))
    best_b = evaluation.select_best_run(_load_run_infos(path_b))
    preds_a = PredictionSet.load(best_a.run_dir / "predictions.jsonl")
    preds_b = PredictionSet.load(best_b.run_dir / "predictions.jsonl")
    result = evaluation.approx_randomization(preds_a, preds_b, metric=metric,
                                             iterations=iterations, seed=seed)
    return result, best_a, best_b
