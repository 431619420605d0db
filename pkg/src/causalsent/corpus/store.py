"""Canonical on-disk corpus format.

Sentence lists are stored as UTF-8 JSON lines with exactly the fields
{id, text, label, source}. A split is a directory holding train.jsonl,
validation.jsonl, test.jsonl plus manifest.json recording the seed and
ratios that produced it.
"""

from __future__ import annotations

import json
from pathlib import Path

from .records import CorpusSplit, DatasetCard, LabeledSentence

_FIELDS = ("id", "text", "label", "source")
SPLIT_FILES = {"train": "train.jsonl", "validation": "validation.jsonl",
               "test": "test.jsonl"}
MANIFEST_FILE = "manifest.json"


def write_sentences(path, sentences: list[LabeledSentence]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for s in sentences:
            record = {"id": s.id, "text": s.text, "label": s.label,
                      "source": s.source}
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def read_sentences(path) -> list[LabeledSentence]:
    sentences = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            record = json.loads(line)
            if set(record) != set(_FIELDS):
                raise ValueError(f"{path}: line {line_no}: fields must be "
                                 f"exactly {_FIELDS}, got {sorted(record)}")
            if record["id"] in seen:
                raise ValueError(f"{path}: line {line_no}: duplicate id "
                                 f"{record['id']!r}")
            seen.add(record["id"])
            sentences.append(LabeledSentence(**record))
    return sentences


def write_split(directory, split: CorpusSplit) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for part, sentences in split.parts():
        write_sentences(directory / SPLIT_FILES[part], sentences)
    manifest = {"seed": split.seed, "ratios": list(split.ratios),
                "files": dict(SPLIT_FILES)}
    (directory / MANIFEST_FILE).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def read_split(directory) -> CorpusSplit:
    directory = Path(directory)
    manifest = json.loads((directory / MANIFEST_FILE).read_text(encoding="utf-8"))
    ratios = tuple(float(r) for r in manifest["ratios"])
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"{directory}: manifest ratios {ratios} do not sum to 1")
    parts = {}
    seen: set[str] = set()
    for part in ("train", "validation", "test"):
        sentences = read_sentences(directory / manifest["files"][part])
        for s in sentences:
            if s.id in seen:
                raise ValueError(f"{directory}: id {s.id!r} appears in more "
                                 f"than one split part")
            seen.add(s.id)
        parts[part] = sentences
    return CorpusSplit(train=parts["train"], validation=parts["validation"],
                       test=parts["test"], seed=int(manifest["seed"]),
                       ratios=ratios)


def write_card(path, card: DatasetCard) -> None:
    Path(path).write_text(json.dumps(card.to_dict(), indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def read_card(path) -> DatasetCard:
    record = json.loads(Path(path).read_text(encoding="utf-8"))
    return DatasetCard(name=record["name"], n_causal=record["n_causal"],
                       n_noncausal=record["n_noncausal"],
                       subsample_target=record.get("subsample_target"))
