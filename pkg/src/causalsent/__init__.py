"""Causal sentence detection toolkit.

Detects whether a sentence expresses at least one cause-effect relation.
Provides corpus converters for four public relation datasets, a
bidirectional-GRU classifier with linear self-attention trained from
scratch on frozen word vectors, a tf-idf n-gram logistic regression
baseline, and the full evaluation protocol (P/R/F1, AUC-PR, multi-seed
aggregation, approximate randomization significance tests).
"""

__version__ = "0.1.0"
