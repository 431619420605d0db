"""Parser for the BioCausal sentence/label table.

The published archive is a delimited text file with one sentence and one
binary label per row. Because the exact column layout is not fixed by any
schema, the parser sniffs the delimiter, detects an optional header row,
and identifies the label column either by header name or as the unique
column whose every value is a recognizable binary label. The known corpus
totals are the authoritative check that the inference was right.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .records import CAUSAL, NON_CAUSAL, LabeledSentence, ParseError

_LABEL_HEADER_NAMES = {"label", "labels", "causal", "class", "is_causal"}
_TEXT_HEADER_NAMES = {"text", "sentence", "sentences"}
_ID_HEADER_NAMES = {"id", "sentence_id", "sid"}

_CAUSAL_VALUES = {"1", "causal", "true", "yes"}
_NONCAUSAL_VALUES = {"0", "non_causal", "noncausal", "non-causal", "not_causal",
                     "false", "no"}


def _normalize_label(value: str) -> str | None:
    value = value.strip().lower()
    if value in _CAUSAL_VALUES:
        return CAUSAL
    if value in _NONCAUSAL_VALUES:
        return NON_CAUSAL
    return None


def _sniff_delimiter(sample: str) -> str:
    try:
        return csv.Sniffer().sniff(sample, delimiters=",\t;").delimiter
    except csv.Error:
        counts = {d: sample.count(d) for d in ("\t", ",", ";")}
        best = max(counts, key=counts.get)
        return best if counts[best] else ","


def _header_columns(row: list[str]) -> tuple[int | None, int | None, int | None] | None:
    """(text_col, label_col, id_col) when the row looks like a header."""
    names = [cell.strip().lower() for cell in row]
    text_col = next((i for i, n in enumerate(names) if n in _TEXT_HEADER_NAMES), None)
    label_col = next((i for i, n in enumerate(names) if n in _LABEL_HEADER_NAMES), None)
    if text_col is None or label_col is None:
        return None
    id_col = next((i for i, n in enumerate(names) if n in _ID_HEADER_NAMES), None)
    return text_col, label_col, id_col


def _infer_columns(rows: list[list[str]], path: Path) -> tuple[int, int]:
    """Pick (text_col, label_col) for headerless files."""
    width = max(len(r) for r in rows)
    binary_cols = [c for c in range(width)
                   if all(c < len(r) and _normalize_label(r[c]) is not None
                          for r in rows)]
    if len(binary_cols) != 1:
        raise ParseError(f"{path.name}: cannot identify a unique binary label column "
                         f"(candidates: {binary_cols})")
    label_col = binary_cols[0]
    text_candidates = [c for c in range(width) if c != label_col]
    if not text_candidates:
        raise ParseError(f"{path.name}: no sentence column")
    text_col = max(text_candidates,
                   key=lambda c: sum(len(r[c]) for r in rows if c < len(r)))
    return text_col, label_col


def parse_biocausal(path) -> list[LabeledSentence]:
    """Parse a BioCausal delimited file into labeled sentences."""
    path = Path(path)
    raw = path.read_text(encoding="utf-8-sig")
    lines = [ln for ln in raw.splitlines() if ln.strip()]
    if not lines:
        return []
    delimiter = _sniff_delimiter("\n".join(lines[:50]))
    rows = list(csv.reader(lines, delimiter=delimiter))

    header = _header_columns(rows[0])
    if header is not None:
        text_col, label_col, id_col = header
        data_rows = rows[1:]
        first_row_no = 2
    else:
        if len(rows) == 1 and all(_normalize_label(c) is None for c in rows[0]):
            # single unlabeled row: header-only file in an unknown dialect
            return []
        text_col, label_col = _infer_columns(rows, path)
        id_col = None
        data_rows = rows
        first_row_no = 1

    sentences = []
    for row_no, row in enumerate(data_rows, start=first_row_no):
        if label_col >= len(row):
            raise ParseError(f"{path.name}: row {row_no}: missing label")
        label = _normalize_label(row[label_col])
        if label is None:
            raise ParseError(
                f"{path.name}: row {row_no}: unrecognized label {row[label_col]!r}")
        text = row[text_col].strip() if text_col < len(row) else ""
        if not text:
            raise ParseError(f"{path.name}: row {row_no}: empty sentence")
        if id_col is not None and id_col < len(row) and row[id_col].strip():
            sid = f"biocausal-{row[id_col].strip()}"
        else:
            sid = f"biocausal-{row_no}"
        sentences.append(LabeledSentence(id=sid, text=text, label=label,
                                         source="biocausal"))
    return sentences
