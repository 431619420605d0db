"""Parser for the SemEval-2010 Task 8 distribution format.

Records look like

    42\t"The <e1>burst</e1> has been caused by water hammer <e2>pressure</e2>."
    Cause-Effect(e2,e1)
    Comment:

separated by blank lines. A sentence is labeled causal exactly when its
relation line starts with ``Cause-Effect``; the entity tags and the
surrounding quotes are stripped from the text.
"""

from __future__ import annotations

import re
from pathlib import Path

from .records import CAUSAL, NON_CAUSAL, LabeledSentence, ParseError

_SENTENCE_RE = re.compile(r'^(\d+)\t"(.*)"\s*$')
_ENTITY_TAGS = ("<e1>", "</e1>", "<e2>", "</e2>")


def _strip_entity_tags(text: str, record_no: int) -> str:
    for open_tag, close_tag in (("<e1>", "</e1>"), ("<e2>", "</e2>")):
        n_open, n_close = text.count(open_tag), text.count(close_tag)
        if n_open != 1 or n_close != 1 or text.index(open_tag) > text.index(close_tag):
            raise ParseError(f"record {record_no}: unbalanced {open_tag} tags")
    for tag in _ENTITY_TAGS:
        text = text.replace(tag, "")
    return text.strip()


def parse_semeval(path) -> list[LabeledSentence]:
    """Parse one SemEval file (train or test-with-keys) into labeled sentences."""
    blocks: list[list[str]] = [[]]
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            blocks[-1].append(line)
        elif blocks[-1]:
            blocks.append([])
    if blocks and not blocks[-1]:
        blocks.pop()

    sentences = []
    for record_no, block in enumerate(blocks, start=1):
        match = _SENTENCE_RE.match(block[0])
        if match is None:
            raise ParseError(
                f"record {record_no}: expected numbered quoted sentence, got {block[0]!r}")
        if len(block) < 2:
            raise ParseError(f"record {record_no}: missing relation line")
        relation = block[1].strip()
        if not relation or relation.startswith("Comment"):
            raise ParseError(f"record {record_no}: missing relation line")
        sample_id, raw_text = match.groups()
        label = CAUSAL if relation.startswith("Cause-Effect") else NON_CAUSAL
        sentences.append(LabeledSentence(
            id=f"semeval-{sample_id}",
            text=_strip_entity_tags(raw_text, record_no),
            label=label,
            source="semeval",
        ))
    return sentences


def semeval_input_files(path) -> list[Path]:
    """Resolve a SemEval path to the record files to parse.

    A file is returned as-is. For a directory, the official distribution
    layout is preferred (TRAIN_FILE.TXT plus TEST_FILE_FULL.TXT, found
    recursively); if neither name is present, every .txt file is used.
    """
    path = Path(path)
    if path.is_file():
        return [path]
    official = sorted(p for p in path.rglob("*.TXT")
                      if p.name in ("TRAIN_FILE.TXT", "TEST_FILE_FULL.TXT"))
    if official:
        return official
    found = sorted(p for p in path.rglob("*") if p.suffix.lower() == ".txt")
    if not found:
        raise ParseError(f"no SemEval record files under {path}")
    return found
