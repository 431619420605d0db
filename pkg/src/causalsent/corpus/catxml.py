"""Parsers for CAT-XML corpora (Causal-TimeBank, EventStoryLine).

CAT documents carry three layers: <token> elements with a sentence index,
markables grouping tokens via <token_anchor> references, and relations
linking markables via <source>/<target> references. Sentences are
reconstructed by joining the tokens of each sentence index with single
spaces.

Labeling rules:
  * Causal-TimeBank: a sentence is causal iff it contains a C-SIGNAL
    markable or both endpoints of a CLINK relation.
  * EventStoryLine: a sentence is causal iff it contains both endpoints of
    a PLOT_LINK whose attributes mark it as CAUSES or CAUSED_BY.

Relations whose endpoints span different sentences are discarded, and a
markable whose tokens span several sentences never marks any of them.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path

from .records import CAUSAL, NON_CAUSAL, LabeledSentence, ParseError

_PLOT_LINK_CAUSAL_VALUES = {"CAUSES", "CAUSED_BY"}


@dataclass
class _CatDocument:
    name: str
    sentence_ids: list[int]                 # in document order
    sentence_text: dict[int, str]
    markable_sentences: dict[str, set[int]]  # m_id -> sentence indices
    markable_tags: dict[str, str]
    relations: list[tuple[str, dict, str | None, str | None]]  # tag, attrs, src, tgt


def _load_document(path: Path) -> _CatDocument:
    try:
        root = ET.parse(path).getroot()
    except ET.ParseError as exc:
        raise ParseError(f"{path.name}: unreadable XML ({exc})") from exc

    token_sentence: dict[str, int] = {}
    sentence_tokens: dict[int, list[str]] = {}
    sentence_ids: list[int] = []
    for token in root.iter("token"):
        t_id = token.get("t_id")
        sent = token.get("sentence")
        if t_id is None or sent is None:
            raise ParseError(f"{path.name}: token missing t_id/sentence attribute")
        sent_idx = int(sent)
        token_sentence[t_id] = sent_idx
        if sent_idx not in sentence_tokens:
            sentence_tokens[sent_idx] = []
            sentence_ids.append(sent_idx)
        word = (token.text or "").strip()
        if word:
            sentence_tokens[sent_idx].append(word)

    markable_sentences: dict[str, set[int]] = {}
    markable_tags: dict[str, str] = {}
    markables = root.find("Markables")
    if markables is not None:
        for elem in markables:
            m_id = elem.get("m_id")
            if m_id is None:
                raise ParseError(f"{path.name}: <{elem.tag}> markable without m_id")
            sents = set()
            for anchor in elem.iter("token_anchor"):
                t_id = anchor.get("t_id")
                if t_id not in token_sentence:
                    raise ParseError(
                        f"{path.name}: markable {m_id} references unknown token {t_id}")
                sents.add(token_sentence[t_id])
            markable_sentences[m_id] = sents
            markable_tags[m_id] = elem.tag.upper()

    relations: list[tuple[str, dict, str | None, str | None]] = []
    relations_elem = root.find("Relations")
    if relations_elem is not None:
        for elem in relations_elem:
            src = elem.find("source")
            tgt = elem.find("target")
            src_id = src.get("m_id") if src is not None else None
            tgt_id = tgt.get("m_id") if tgt is not None else None
            for ref in (src_id, tgt_id):
                if ref is not None and ref not in markable_sentences:
                    raise ParseError(
                        f"{path.name}: relation {elem.get('r_id')} references "
                        f"unknown markable {ref}")
            relations.append((elem.tag.upper(), dict(elem.attrib), src_id, tgt_id))

    sentence_text = {idx: " ".join(tokens)
                     for idx, tokens in sentence_tokens.items() if tokens}
    return _CatDocument(name=path.stem, sentence_ids=sentence_ids,
                        sentence_text=sentence_text,
                        markable_sentences=markable_sentences,
                        markable_tags=markable_tags, relations=relations)


def _single_sentence(sents: set[int]) -> int | None:
    """The one sentence containing a markable (or endpoint pair), else None."""
    if len(sents) == 1:
        return next(iter(sents))
    return None


def _emit(doc: _CatDocument, causal_sentences: set[int], source: str,
          out: list[LabeledSentence]) -> None:
    for idx in doc.sentence_ids:
        text = doc.sentence_text.get(idx)
        if not text:
            continue
        out.append(LabeledSentence(
            id=f"{source}-{doc.name}-s{idx}",
            text=text,
            label=CAUSAL if idx in causal_sentences else NON_CAUSAL,
            source=source,
        ))


def _document_paths(path) -> list[Path]:
    root = Path(path)
    paths = sorted(p for p in root.rglob("*") if p.suffix.lower() == ".xml")
    if not paths:
        raise ParseError(f"no CAT-XML documents under {root}")
    return paths


def parse_causal_timebank(path) -> list[LabeledSentence]:
    """Parse a directory of Causal-TimeBank CAT-XML documents."""
    sentences: list[LabeledSentence] = []
    for doc_path in _document_paths(path):
        doc = _load_document(doc_path)
        causal: set[int] = set()
        for m_id, tag in doc.markable_tags.items():
            if tag == "C-SIGNAL":
                sent = _single_sentence(doc.markable_sentences[m_id])
                if sent is not None:
                    causal.add(sent)
        for tag, _attrs, src, tgt in doc.relations:
            if tag == "CLINK" and src is not None and tgt is not None:
                sent = _single_sentence(doc.markable_sentences[src]
                                        | doc.markable_sentences[tgt])
                if sent is not None:
                    causal.add(sent)
        _emit(doc, causal, "causaltb", sentences)
    return sentences


def parse_event_storyline(path) -> list[LabeledSentence]:
    """Parse a directory of EventStoryLine CAT-XML documents."""
    sentences: list[LabeledSentence] = []
    for doc_path in _document_paths(path):
        doc = _load_document(doc_path)
        causal: set[int] = set()
        for tag, attrs, src, tgt in doc.relations:
            if tag != "PLOT_LINK" or src is None or tgt is None:
                continue
            values = {str(v).strip().upper() for v in attrs.values()}
            if values & _PLOT_LINK_CAUSAL_VALUES:
                sent = _single_sentence(doc.markable_sentences[src]
                                        | doc.markable_sentences[tgt])
                if sent is not None:
                    causal.add(sent)
        _emit(doc, causal, "eventsl", sentences)
    return sentences
