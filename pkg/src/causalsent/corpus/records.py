"""Canonical labeled-sentence records shared by all corpus converters."""

from __future__ import annotations

from dataclasses import dataclass

CAUSAL = "causal"
NON_CAUSAL = "non_causal"
LABELS = (CAUSAL, NON_CAUSAL)

SOURCES = ("semeval", "causaltb", "eventsl", "biocausal")


class ParseError(ValueError):
    """A source corpus file violates its distribution format."""


@dataclass(frozen=True)
class LabeledSentence:
    """One sentence with a binary causal label and source provenance."""

    id: str
    text: str
    label: str
    source: str

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"bad label {self.label!r} for sentence {self.id!r}")
        if not self.text.strip():
            raise ValueError(f"empty text for sentence {self.id!r}")
        if not self.id:
            raise ValueError("empty sentence id")

    @property
    def is_causal(self) -> bool:
        return self.label == CAUSAL


@dataclass
class CorpusSplit:
    """Stratified train/validation/test partition of a sentence list."""

    train: list[LabeledSentence]
    validation: list[LabeledSentence]
    test: list[LabeledSentence]
    seed: int
    ratios: tuple[float, float, float]

    def parts(self):
        return (("train", self.train), ("validation", self.validation),
                ("test", self.test))


@dataclass
class DatasetCard:
    """Headline counts of a converted dataset."""

    name: str
    n_causal: int
    n_noncausal: int
    subsample_target: int | None = None

    def __post_init__(self):
        if self.n_causal < 0 or self.n_noncausal < 0:
            raise ValueError("negative counts")
        if self.subsample_target is not None and self.subsample_target > self.n_noncausal:
            raise ValueError("subsample_target exceeds non-causal count")

    def to_dict(self) -> dict:
        return {"name": self.name, "n_causal": self.n_causal,
                "n_noncausal": self.n_noncausal,
                "subsample_target": self.subsample_target}


def count_labels(sentences) -> tuple[int, int]:
    """(causal, non_causal) counts."""
    n_causal = sum(1 for s in sentences if s.is_causal)
    return n_causal, len(sentences) - n_causal


def card_for(name: str, sentences, subsample_target: int | None = None) -> DatasetCard:
    n_causal, n_noncausal = count_labels(sentences)
    return DatasetCard(name=name, n_causal=n_causal, n_noncausal=n_noncausal,
                       subsample_target=subsample_target)
