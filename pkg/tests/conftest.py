"""Shared fixtures: tiny hand-built corpora, embeddings, and data paths.

Real source corpora are not redistributable, so quantitative full-corpus
checks only run when CAUSALSENT_DATA points at a directory containing
them (see README); everything else runs on fixtures.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
import pytest

from causalsent.corpus import CAUSAL, NON_CAUSAL, CorpusSplit, LabeledSentence
from causalsent.embeddings import EmbeddingMatrix

SEMEVAL_FIXTURE = '''1\t"The <e1>fire</e1> was started by a careless <e2>camper</e2>."
Cause-Effect(e2,e1)
Comment:

2\t"The <e1>handle</e1> is part of the <e2>door</e2>."
Component-Whole(e2,e1)
Comment: plain part-whole
'''

CAUSALTB_DOC = """<?xml version="1.0" encoding="UTF-8"?>
<Document doc_name="fixture_a">
<token t_id="1" sentence="0" number="0">Heavy</token>
<token t_id="2" sentence="0" number="1">rain</token>
<token t_id="3" sentence="0" number="2">caused</token>
<token t_id="4" sentence="0" number="3">floods</token>
<token t_id="5" sentence="1" number="0">People</token>
<token t_id="6" sentence="1" number="1">stayed</token>
<token t_id="7" sentence="1" number="2">home</token>
<token t_id="8" sentence="2" number="0">Schools</token>
<token t_id="9" sentence="2" number="1">reopened</token>
<token t_id="10" sentence="2" number="2">later</token>
<Markables>
<EVENT m_id="1"><token_anchor t_id="2"/></EVENT>
<EVENT m_id="2"><token_anchor t_id="4"/></EVENT>
<EVENT m_id="3"><token_anchor t_id="6"/></EVENT>
<EVENT m_id="4"><token_anchor t_id="9"/></EVENT>
</Markables>
<Relations>
<CLINK r_id="r1"><source m_id="1"/><target m_id="2"/></CLINK>
</Relations>
</Document>
"""

CAUSALTB_CROSS_DOC = """<?xml version="1.0" encoding="UTF-8"?>
<Document doc_name="fixture_cross">
<token t_id="1" sentence="0" number="0">Prices</token>
<token t_id="2" sentence="0" number="1">rose</token>
<token t_id="3" sentence="1" number="0">Demand</token>
<token t_id="4" sentence="1" number="1">fell</token>
<Markables>
<EVENT m_id="1"><token_anchor t_id="2"/></EVENT>
<EVENT m_id="2"><token_anchor t_id="4"/></EVENT>
</Markables>
<Relations>
<CLINK r_id="r1"><source m_id="1"/><target m_id="2"/></CLINK>
</Relations>
</Document>
"""

CAUSALTB_SIGNAL_DOC = """<?xml version="1.0" encoding="UTF-8"?>
<Document doc_name="fixture_signal">
<token t_id="1" sentence="0" number="0">He</token>
<token t_id="2" sentence="0" number="1">left</token>
<token t_id="3" sentence="0" number="2">because</token>
<token t_id="4" sentence="0" number="3">of</token>
<token t_id="5" sentence="0" number="4">rain</token>
<token t_id="6" sentence="1" number="0">It</token>
<token t_id="7" sentence="1" number="1">was</token>
<token t_id="8" sentence="1" number="2">cold</token>
<Markables>
<C-SIGNAL m_id="1"><token_anchor t_id="3"/><token_anchor t_id="4"/></C-SIGNAL>
</Markables>
<Relations>
</Relations>
</Document>
"""

EVENTSL_DOC = """<?xml version="1.0" encoding="UTF-8"?>
<Document doc_name="fixture_esl">
<token t_id="1" sentence="0" number="0">The</token>
<token t_id="2" sentence="0" number="1">quake</token>
<token t_id="3" sentence="0" number="2">toppled</token>
<token t_id="4" sentence="0" number="3">buildings</token>
<token t_id="5" sentence="1" number="0">Rescue</token>
<token t_id="6" sentence="1" number="1">teams</token>
<token t_id="7" sentence="1" number="2">arrived</token>
<Markables>
<EVENT m_id="1"><token_anchor t_id="2"/></EVENT>
<EVENT m_id="2"><token_anchor t_id="3"/></EVENT>
<EVENT m_id="3"><token_anchor t_id="7"/></EVENT>
</Markables>
<Relations>
<PLOT_LINK r_id="p1" relType="CAUSED_BY"><source m_id="2"/><target m_id="1"/></PLOT_LINK>
<PLOT_LINK r_id="p2" relType="FALLING_ACTION"><source m_id="1"/><target m_id="3"/></PLOT_LINK>
</Relations>
</Document>
"""

BIOCAUSAL_FIXTURE = """sentence,label
Smoking causes lung cancer,1
The patient was admitted on Tuesday,0
IL-6 up-regulates CRP expression,1
Samples were stored at -80 degrees,0
"""


@pytest.fixture
def semeval_file(tmp_path):
    path = tmp_path / "semeval_fixture.txt"
    path.write_text(SEMEVAL_FIXTURE, encoding="utf-8")
    return path


@pytest.fixture
def causaltb_dir(tmp_path):
    root = tmp_path / "causaltb"
    root.mkdir()
    (root / "fixture_a.xml").write_text(CAUSALTB_DOC, encoding="utf-8")
    (root / "fixture_cross.xml").write_text(CAUSALTB_CROSS_DOC, encoding="utf-8")
    (root / "fixture_signal.xml").write_text(CAUSALTB_SIGNAL_DOC, encoding="utf-8")
    return root


@pytest.fixture
def eventsl_dir(tmp_path):
    root = tmp_path / "eventsl"
    root.mkdir()
    (root / "fixture_esl.xml").write_text(EVENTSL_DOC, encoding="utf-8")
    return root


@pytest.fixture
def biocausal_file(tmp_path):
    path = tmp_path / "biocausal_fixture.csv"
    path.write_text(BIOCAUSAL_FIXTURE, encoding="utf-8")
    return path


def make_sentences(n_causal, n_noncausal, source="biocausal", prefix="s"):
    out = []
    for i in range(n_causal):
        out.append(LabeledSentence(id=f"{prefix}-c{i}", text=f"x causes y {i}",
                                   label=CAUSAL, source=source))
    for i in range(n_noncausal):
        out.append(LabeledSentence(id=f"{prefix}-n{i}", text=f"plain text {i}",
                                   label=NON_CAUSAL, source=source))
    return out


TOY_CAUSAL_VERBS = ["causes", "triggers", "induces", "provokes"]
TOY_PLAIN_VERBS = ["follows", "precedes", "resembles", "accompanies"]
TOY_NOUNS = ["smoking", "stress", "inflammation", "noise", "heat", "dust",
             "cancer", "fatigue", "fever", "pain"]


def toy_corpus(n_per_class=16, seed=7):
    """Separable sentences: the verb alone decides the label."""
    rng = np.random.default_rng(seed)
    sentences = []
    for i in range(n_per_class):
        a, b = rng.choice(TOY_NOUNS, size=2, replace=False)
        verb = TOY_CAUSAL_VERBS[i % len(TOY_CAUSAL_VERBS)]
        sentences.append(LabeledSentence(id=f"toy-c{i}", text=f"{a} {verb} {b}",
                                         label=CAUSAL, source="biocausal"))
        a, b = rng.choice(TOY_NOUNS, size=2, replace=False)
        verb = TOY_PLAIN_VERBS[i % len(TOY_PLAIN_VERBS)]
        sentences.append(LabeledSentence(id=f"toy-n{i}", text=f"{a} {verb} {b}",
                                         label=NON_CAUSAL, source="biocausal"))
    return sentences


def toy_embeddings(dim=12, seed=3):
    """Random frozen vectors covering the toy vocabulary."""
    words = sorted(set(TOY_CAUSAL_VERBS + TOY_PLAIN_VERBS + TOY_NOUNS))
    rng = np.random.default_rng(seed)
    vectors = rng.normal(scale=0.5, size=(len(words), dim)).astype(np.float32)
    return EmbeddingMatrix(dim=dim, vocab={w: i for i, w in enumerate(words)},
                           vectors=vectors)


def toy_split(n_per_class=16, seed=7):
    """Train on everything, validate/test on the same set (overfit checks)."""
    sentences = toy_corpus(n_per_class, seed)
    return CorpusSplit(train=sentences, validation=sentences, test=sentences,
                       seed=seed, ratios=(1.0, 0.0, 0.0))


@pytest.fixture
def data_dir():
    """Real-corpora root, or None when unavailable."""
    root = os.environ.get("CAUSALSENT_DATA")
    if root and Path(root).is_dir():
        return Path(root)
    return None
