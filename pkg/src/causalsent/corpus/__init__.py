"""Corpus converters, sampling, and the canonical labeled-sentence store."""

from .biocausal import parse_biocausal
from .catxml import parse_causal_timebank, parse_event_storyline
from .records import (CAUSAL, NON_CAUSAL, CorpusSplit, DatasetCard,
                      LabeledSentence, ParseError, card_for, count_labels)
from .sampling import (DEFAULT_RATIOS, DEFAULT_SEED, stratified_split,
                       subsample_negatives)
from .semeval import parse_semeval, semeval_input_files
from .store import (read_card, read_sentences, read_split, write_card,
                    write_sentences, write_split)

__all__ = [
    "CAUSAL", "NON_CAUSAL", "LabeledSentence", "CorpusSplit", "DatasetCard",
    "ParseError", "card_for", "count_labels",
    "parse_semeval", "semeval_input_files",
    "parse_causal_timebank", "parse_event_storyline", "parse_biocausal",
    "subsample_negatives", "stratified_split", "DEFAULT_RATIOS", "DEFAULT_SEED",
    "write_sentences", "read_sentences", "write_split", "read_split",
    "write_card", "read_card",
]
