"""Frozen pre-trained word vectors and precomputed contextual vectors.

Word vectors are loaded once from the standard word2vec text or binary
formats and never updated afterwards; the loaded matrix is marked
read-only to enforce that. Out-of-vocabulary tokens map to the all-zeros
vector.

Contextual vectors (1024-dim per token, one record per sentence id) are
consumed from a sidecar file produced by an external language model and
concatenated position-wise onto the static vectors.
"""

from __future__ import annotations

import logging
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import binio

logger = logging.getLogger(__name__)

CONTEXTUAL_DIM = 1024

_CTX_MAGIC = b"CTXV"
_CTX_VERSION = 1


class EmbeddingError(ValueError):
    """A word-vector file violates its declared format."""


@dataclass
class EmbeddingMatrix:
    """Immutable word -> vector lookup table."""

    dim: int
    vocab: dict[str, int]
    vectors: np.ndarray          # (n_words, dim) float32, read-only
    duplicate_count: int = 0

    def __post_init__(self):
        self.vectors.setflags(write=False)

    def __contains__(self, word: str) -> bool:
        return word in self.vocab


def _finalize_matrix(words: list[str], rows: np.ndarray, declared: int,
                     path) -> EmbeddingMatrix:
    if len(words) != declared:
        raise EmbeddingError(f"{path}: header declares {declared} words, "
                             f"file contains {len(words)}")
    if not np.isfinite(rows).all():
        raise EmbeddingError(f"{path}: non-finite vector values")
    vocab: dict[str, int] = {}
    keep: list[int] = []
    duplicates = 0
    for i, word in enumerate(words):
        if word in vocab:
            duplicates += 1
            continue
        vocab[word] = len(keep)
        keep.append(i)
    if duplicates:
        logger.warning("%s: %d duplicate words (first occurrence kept)",
                       path, duplicates)
        rows = rows[keep]
    return EmbeddingMatrix(dim=rows.shape[1], vocab=vocab,
                           vectors=np.ascontiguousarray(rows),
                           duplicate_count=duplicates)


def _parse_header(line: str, path) -> tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise EmbeddingError(f"{path}: bad header {line!r} (want 'count dim')")
    try:
        count, dim = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise EmbeddingError(f"{path}: bad header {line!r}") from exc
    if count < 0 or dim <= 0:
        raise EmbeddingError(f"{path}: bad header {line!r}")
    return count, dim


def _load_word2vec_text(path) -> EmbeddingMatrix:
    with open(path, encoding="utf-8") as fh:
        count, dim = _parse_header(fh.readline().rstrip("\n"), path)
        words: list[str] = []
        rows = np.empty((count, dim), dtype=np.float32)
        for line in fh:
            if not line.strip():
                continue
            parts = line.rstrip("\n").split(" ")
            if len(parts) != dim + 1:
                raise EmbeddingError(f"{path}: entry {len(words) + 1}: expected "
                                     f"{dim} values, got {len(parts) - 1}")
            if len(words) >= count:
                raise EmbeddingError(f"{path}: header declares {count} words, "
                                     f"file contains more")
            rows[len(words)] = np.array(parts[1:], dtype=np.float32)
            words.append(parts[0])
    return _finalize_matrix(words, rows, count, path)


def _load_word2vec_binary(path) -> EmbeddingMatrix:
    with open(path, "rb") as fh:
        header = bytearray()
        while True:
            ch = fh.read(1)
            if not ch:
                raise EmbeddingError(f"{path}: missing header line")
            if ch == b"\n":
                break
            header += ch
        count, dim = _parse_header(header.decode("utf-8"), path)
        words: list[str] = []
        rows = np.empty((count, dim), dtype=np.float32)
        row_bytes = 4 * dim
        while True:
            word = bytearray()
            ch = fh.read(1)
            while ch in (b"\n", b" ") and ch:  # skip record separators
                ch = fh.read(1)
            if not ch:
                break
            while ch != b" ":
                if not ch:
                    raise EmbeddingError(f"{path}: truncated word after "
                                         f"{len(words)} entries")
                word += ch
                ch = fh.read(1)
            raw = fh.read(row_bytes)
            if len(raw) != row_bytes:
                raise EmbeddingError(f"{path}: truncated vector for "
                                     f"{word.decode('utf-8', 'replace')!r}")
            if len(words) >= count:
                raise EmbeddingError(f"{path}: header declares {count} words, "
                                     f"file contains more")
            rows[len(words)] = np.frombuffer(raw, dtype="<f4")
            words.append(word.decode("utf-8"))
    return _finalize_matrix(words, rows, count, path)


def load_word2vec(path, format: str = "text") -> EmbeddingMatrix:
    """Load word2vec vectors from `path` in the given format (text|binary)."""
    if format == "text":
        return _load_word2vec_text(path)
    if format == "binary":
        return _load_word2vec_binary(path)
    raise ValueError(f"unknown word2vec format {format!r}")


def write_word2vec(path, matrix: EmbeddingMatrix, format: str = "text") -> None:
    """Write vectors back out in word2vec text or binary format."""
    words = sorted(matrix.vocab, key=matrix.vocab.get)
    if format == "text":
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"{len(words)} {matrix.dim}\n")
            for word in words:
                row = matrix.vectors[matrix.vocab[word]]
                fh.write(word + " " + " ".join(repr(float(x)) for x in row) + "\n")
    elif format == "binary":
        with open(path, "wb") as fh:
            fh.write(f"{len(words)} {matrix.dim}\n".encode("utf-8"))
            for word in words:
                row = matrix.vectors[matrix.vocab[word]]
                fh.write(word.encode("utf-8") + b" ")
                fh.write(row.astype("<f4").tobytes())
                fh.write(b"\n")
    else:
        raise ValueError(f"unknown word2vec format {format!r}")


def embed(matrix: EmbeddingMatrix, tokens: list[str]) -> np.ndarray:
    """Token sequence -> (n, dim) float32; OOV tokens become zero vectors."""
    if not tokens:
        raise ValueError("empty token sequence")
    out = np.zeros((len(tokens), matrix.dim), dtype=np.float32)
    for i, token in enumerate(tokens):
        row = matrix.vocab.get(token)
        if row is not None:
            out[i] = matrix.vectors[row]
    return out


def matrix_checksum(matrix: EmbeddingMatrix) -> int:
    """Cheap content hash used to assert the frozen-embedding guarantee."""
    import zlib
    return zlib.crc32(matrix.vectors.tobytes())


@dataclass
class ContextualVectors:
    """Per-sentence token vectors keyed by sentence id."""

    dim: int
    records: dict[str, np.ndarray] = field(default_factory=dict)

    def add(self, sentence_id: str, vectors: np.ndarray) -> None:
        vectors = np.asarray(vectors, dtype=np.float32)
        if vectors.ndim != 2 or vectors.shape[1] != self.dim:
            raise ValueError(f"{sentence_id}: expected (n, {self.dim}) vectors, "
                             f"got shape {vectors.shape}")
        self.records[sentence_id] = vectors


def write_contextual(path, vectors: ContextualVectors) -> None:
    def _write(fh):
        fh.write(_CTX_MAGIC)
        binio.write_u32(fh, _CTX_VERSION)
        binio.write_u32(fh, vectors.dim)
        for sentence_id, rows in vectors.records.items():
            raw_id = sentence_id.encode("utf-8")
            binio.write_u32(fh, len(raw_id))
            fh.write(raw_id)
            binio.write_u32(fh, rows.shape[0])
            fh.write(rows.astype("<f4").tobytes())

    binio.atomic_write(path, _write)


def read_contextual(path) -> ContextualVectors:
    with open(path, "rb") as fh:
        binio.check_magic(fh, _CTX_MAGIC, "contextual vector")
        version = binio.read_u32(fh)
        if version != _CTX_VERSION:
            raise binio.FormatError(f"unsupported contextual file version {version}")
        dim = binio.read_u32(fh)
        out = ContextualVectors(dim=dim)
        while True:
            head = fh.read(4)
            if not head:
                break
            id_len = struct.unpack("<I", head)[0]
            sentence_id = fh.read(id_len).decode("utf-8")
            n_tokens = binio.read_u32(fh)
            raw = fh.read(4 * n_tokens * dim)
            if len(raw) != 4 * n_tokens * dim:
                raise binio.FormatError(f"truncated record for {sentence_id!r}")
            out.records[sentence_id] = np.frombuffer(raw, dtype="<f4").reshape(
                n_tokens, dim).astype(np.float32)
    return out


def concat_contextual(seq: np.ndarray, ctx: np.ndarray,
                      sentence_id: str = "?") -> np.ndarray:
    """Concatenate static and contextual vectors position-wise."""
    if seq.shape[0] != ctx.shape[0]:
        raise ValueError(f"sentence {sentence_id!r}: {seq.shape[0]} tokens but "
                         f"{ctx.shape[0]} contextual vectors")
    return np.concatenate([seq, ctx.astype(seq.dtype, copy=False)], axis=1)
