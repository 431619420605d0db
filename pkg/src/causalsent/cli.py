"""Command-line interface.

Subcommands: convert (source corpus -> canonical jsonl + dataset card),
split (canonical jsonl -> stratified split directory), train (config file
-> per-seed run artifacts), eval (runs + test split -> metrics table),
sigtest (two run outputs -> approximate-randomization p-value).

Exit codes: 0 success, 1 validation error (bad arguments/config),
2 runtime error (bad data, failed run).
"""

from __future__ import annotations

import argparse
import sys

from . import corpus, experiment
from .binio import FormatError
from .corpus import ParseError
from .embeddings import EmbeddingError
from .nn.train import TrainingDiverged

_CONVERTERS = {
    "semeval": None,  # handled specially: may span several files
    "causaltb": corpus.parse_causal_timebank,
    "eventsl": corpus.parse_event_storyline,
    "biocausal": corpus.parse_biocausal,
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="causalsent",
                     description="Causal sentence detection toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    convert = sub.add_parser("convert", help="parse a source corpus into the "
                             "canonical jsonl format")
    convert.add_argument("source", choices=sorted(_CONVERTERS))
    convert.add_argument("in_path")
    convert.add_argument("out_path")
    convert.add_argument("--subsample", type=int, default=None,
                         help="keep this many non-causal sentences")
    convert.add_argument("--seed", type=int, default=corpus.DEFAULT_SEED)

    split = sub.add_parser("split", help="stratified train/validation/test split")
    split.add_argument("in_path", help="canonical jsonl file")
    split.add_argument("out_dir")
    split.add_argument("--ratios", default="0.70,0.15,0.15")
    split.add_argument("--seed", type=int, default=corpus.DEFAULT_SEED)

    train = sub.add_parser("train", help="train all repetitions of an experiment")
    train.add_argument("config", help="key = value experiment config file")

    evaluate = sub.add_parser("eval", help="score trained runs on the test part")
    evaluate.add_argument("runs_path", help="experiment output directory")
    evaluate.add_argument("split_dir", help="split directory with the test part")
    evaluate.add_argument("--embeddings", default=None,
                          help="override the embeddings path stored in checkpoints")
    evaluate.add_argument("--embeddings-format", default=None,
                          choices=("text", "binary"))
    evaluate.add_argument("--contextual", default=None)

    sigtest = sub.add_parser("sigtest", help="approximate randomization test "
                             "between two experiments' best runs")
    sigtest.add_argument("dir_a")
    sigtest.add_argument("dir_b")
    sigtest.add_argument("--metric", default="auc_pr",
                         choices=("precision", "recall", "f1", "auc_pr"))
    sigtest.add_argument("--seed", type=int, default=0)
    sigtest.add_argument("--iterations", type=int, default=10_000)
    return parser


def _cmd_convert(args) -> int:
    if args.source == "semeval":
        sentences = []
        for path in corpus.semeval_input_files(args.in_path):
            sentences.extend(corpus.parse_semeval(path))
    else:
        sentences = _CONVERTERS[args.source](args.in_path)
    n_causal, n_noncausal = corpus.count_labels(sentences)
    print(f"{len(sentences)} total, {n_causal} causal")
    if args.subsample is not None:
        sentences = corpus.subsample_negatives(sentences, args.subsample,
                                               args.seed)
        print(f"subsampled negatives to {args.subsample} "
              f"(seed {args.seed}): {len(sentences)} total")
    corpus.write_sentences(args.out_path, sentences)
    card = corpus.card_for(args.source, sentences,
                           subsample_target=args.subsample)
    card_path = str(args.out_path).rsplit(".", 1)[0] + ".card.json"
    corpus.write_card(card_path, card)
    print(f"wrote {args.out_path} and {card_path}")
    return 0


def _cmd_split(args) -> int:
    try:
        ratios = tuple(float(r) for r in args.ratios.split(","))
    except ValueError:
        raise _UsageError(f"cannot parse ratios {args.ratios!r}")
    sentences = corpus.read_sentences(args.in_path)
    split = corpus.stratified_split(sentences, ratios=ratios, seed=args.seed)
    corpus.write_split(args.out_dir, split)
    for part, items in split.parts():
        n_causal, n_noncausal = corpus.count_labels(items)
        print(f"{part}: {len(items)} ({n_causal} causal, {n_noncausal} non-causal)")
    return 0


def _cmd_train(args) -> int:
    config = experiment.load_config(args.config)
    for metrics in experiment.run_training(config):
        best = (f", best epoch {metrics['best_epoch']}"
                if metrics["best_epoch"] is not None else "")
        print(f"seed {metrics['seed']}: val F1 {metrics['val_f1']:.2f}{best}")
    print(f"wrote {config.repetitions} run(s) under {config.runs_dir()}")
    return 0


def _cmd_eval(args) -> int:
    split = corpus.read_split(args.split_dir)
    summary = experiment.evaluate_runs(args.runs_path, split,
                                       embeddings_path=args.embeddings,
                                       embeddings_format=args.embeddings_format,
                                       contextual_path=args.contextual)
    print(experiment.format_table(summary), end="")
    return 0


def _cmd_sigtest(args) -> int:
    result, best_a, best_b = experiment.significance(
        args.dir_a, args.dir_b, metric=args.metric, seed=args.seed,
        iterations=args.iterations)
    print(f"best runs: A seed {best_a.seed} (val F1 {best_a.val_f1:.2f}), "
          f"B seed {best_b.seed} (val F1 {best_b.val_f1:.2f})")
    star = " *" if result.significant else ""
    print(f"{result.metric}: p = {result.p_value:.4f}{star} "
          f"({result.iterations} iterations, swap {result.swap_fraction})")
    return 0


_COMMANDS = {"convert": _cmd_convert, "split": _cmd_split, "train": _cmd_train,
             "eval": _cmd_eval, "sigtest": _cmd_sigtest}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except experiment.ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ParseError, FormatError, EmbeddingError, TrainingDiverged,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
