"""Tokenization and tf-idf n-gram featurization shared by all models.

The tokenizer is deliberately simple and language-neutral: lowercase the
text, then emit maximal runs of Unicode letters or digits; every other
character separates tokens. "IL-6 up-regulates CRP" therefore becomes
[il, 6, up, regulates, crp].
"""

from __future__ import annotations

import math
import unicodedata
from dataclasses import dataclass

import numpy as np

from . import binio

NGRAM_ORDERS = (1, 2, 3)

_TFIDF_MAGIC = b"TFIV"
_TFIDF_VERSION = 1


def _is_token_char(ch: str) -> bool:
    return unicodedata.category(ch)[0] in ("L", "N")


def tokenize(text: str) -> list[str]:
    """Split text into lowercase runs of letters/digits.

    Raises ValueError when no token survives, which marks the sentence as
    unusable for any downstream model.
    """
    tokens = []
    current: list[str] = []
    for ch in text.lower():
        if _is_token_char(ch):
            current.append(ch)
        elif current:
            tokens.append("".join(current))
            current = []
    if current:
        tokens.append("".join(current))
    if not tokens:
        raise ValueError(f"no tokens in text: {text!r}")
    return tokens


def ngrams(tokens: list[str], orders=NGRAM_ORDERS) -> list[str]:
    """All space-joined n-grams of the given orders, in position order."""
    out = []
    for n in orders:
        for i in range(len(tokens) - n + 1):
            out.append(" ".join(tokens[i:i + n]))
    return out


@dataclass
class SparseVector:
    """Sorted sparse feature vector; L2-normalized by transform()."""

    indices: np.ndarray  # int64, strictly increasing
    values: np.ndarray   # float64


@dataclass
class TfidfModel:
    """Vocabulary and smoothed idf weights fitted on a token corpus."""

    vocabulary: dict[str, int]   # n-gram -> dense column index
    idf: np.ndarray              # float64, one weight per column
    doc_count: int
    ngram_orders: tuple[int, ...] = NGRAM_ORDERS


def fit_tfidf(corpus: list[list[str]], orders=NGRAM_ORDERS) -> TfidfModel:
    """Build the n-gram vocabulary and idf weights from tokenized documents.

    idf(t) = ln((1 + N) / (1 + df(t))) + 1, the smoothed variant, so every
    weight is finite and positive even for n-grams present in all documents.
    Column indices are assigned in lexicographic n-gram order.
    """
    if not corpus:
        raise ValueError("empty corpus")
    df: dict[str, int] = {}
    for tokens in corpus:
        for gram in set(ngrams(tokens, orders)):
            df[gram] = df.get(gram, 0) + 1
    vocabulary = {gram: i for i, gram in enumerate(sorted(df))}
    n_docs = len(corpus)
    idf = np.empty(len(vocabulary), dtype=np.float64)
    for gram, col in vocabulary.items():
        idf[col] = math.log((1.0 + n_docs) / (1.0 + df[gram])) + 1.0
    return TfidfModel(vocabulary=vocabulary, idf=idf, doc_count=n_docs,
                      ngram_orders=tuple(orders))


def transform(model: TfidfModel, tokens: list[str]) -> SparseVector:
    """tf·idf over known n-grams, L2-normalized.

    Unseen n-grams are ignored; a sentence with no known n-gram maps to the
    zero vector.
    """
    counts: dict[int, int] = {}
    for gram in ngrams(tokens, model.ngram_orders):
        col = model.vocabulary.get(gram)
        if col is not None:
            counts[col] = counts.get(col, 0) + 1
    if not counts:
        return SparseVector(indices=np.empty(0, dtype=np.int64),
                            values=np.empty(0, dtype=np.float64))
    indices = np.array(sorted(counts), dtype=np.int64)
    values = np.array([counts[i] for i in indices], dtype=np.float64)
    values *= model.idf[indices]
    values /= np.linalg.norm(values)
    return SparseVector(indices=indices, values=values)


def save_tfidf(path, model: TfidfModel) -> None:
    def _write(fh):
        fh.write(_TFIDF_MAGIC)
        binio.write_u32(fh, _TFIDF_VERSION)
        binio.write_json(fh, {"doc_count": model.doc_count,
                              "ngram_orders": list(model.ngram_orders)})
        grams = sorted(model.vocabulary, key=model.vocabulary.get)
        binio.write_str(fh, "\n".join(grams))
        binio.write_array(fh, model.idf.astype(np.float64))

    binio.atomic_write(path, _write)


def load_tfidf(path) -> TfidfModel:
    with open(path, "rb") as fh:
        binio.check_magic(fh, _TFIDF_MAGIC, "tf-idf model")
        version = binio.read_u32(fh)
        if version != _TFIDF_VERSION:
            raise binio.FormatError(f"unsupported tf-idf model version {version}")
        meta = binio.read_json(fh)
        grams = binio.read_str(fh)
        vocabulary = {g: i for i, g in enumerate(grams.split("\n"))} if grams else {}
        idf = binio.read_array(fh, np.float64)
    if len(vocabulary) != len(idf):
        raise binio.FormatError("vocabulary/idf length mismatch")
    return TfidfModel(vocabulary=vocabulary, idf=idf,
                      doc_count=int(meta["doc_count"]),
                      ngram_orders=tuple(meta["ngram_orders"]))
