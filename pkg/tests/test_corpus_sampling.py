import math

import numpy as np
import pytest

from causalsent.corpus import (CorpusSplit, count_labels, stratified_split,
                               subsample_negatives)

from conftest import make_sentences


class TestSubsampleNegatives:
    def test_keeps_every_causal_sentence(self):
        sentences = make_sentences(40, 100)
        out = subsample_negatives(sentences, target=30, seed=5)
        assert count_labels(out) == (40, 30)
        assert {s.id for s in out if s.is_causal} == \
            {s.id for s in sentences if s.is_causal}

    def test_noop_when_target_equals_negatives(self):
        sentences = make_sentences(10, 25)
        assert subsample_negatives(sentences, target=25, seed=1) == sentences

    def test_deterministic_per_seed(self):
        sentences = make_sentences(5, 10)
        a = subsample_negatives(sentences, target=3, seed=99)
        b = subsample_negatives(sentences, target=3, seed=99)
        assert [s.id for s in a] == [s.id for s in b]
        c = subsample_negatives(sentences, target=3, seed=100)
        assert [s.id for s in a] != [s.id for s in c] or a == c  # may collide

    def test_order_preserved(self):
        sentences = make_sentences(20, 50)
        out = subsample_negatives(sentences, target=10, seed=0)
        positions = {s.id: i for i, s in enumerate(sentences)}
        assert [positions[s.id] for s in out] == \
            sorted(positions[s.id] for s in out)

    def test_target_too_large_rejected(self):
        with pytest.raises(ValueError, match="exceeds"):
            subsample_negatives(make_sentences(5, 10), target=11, seed=0)


class TestStratifiedSplit:
    def test_exact_divisibility(self):
        sentences = make_sentences(100, 200)
        split = stratified_split(sentences, seed=3)
        assert count_labels(split.train) == (70, 140)
        assert count_labels(split.validation) == (15, 30)
        assert count_labels(split.test) == (15, 30)

    def test_biocausal_shape_ratios_within_one(self):
        # train/val get floor(ratio*n); the remainder goes to test, which can
        # overshoot the exact proportion by the two dropped fractions, so the
        # per-class counts sit within one sentence of the rounded proportion
        sentences = make_sentences(1113, 887)
        split = stratified_split(sentences, seed=13)
        for part, ratio in ((split.train, 0.70), (split.validation, 0.15),
                            (split.test, 0.15)):
            n_causal, n_noncausal = count_labels(part)
            assert abs(n_causal - round(ratio * 1113)) <= 1
            assert abs(n_noncausal - round(ratio * 887)) <= 1
        assert count_labels(split.train) == (math.floor(0.7 * 1113),
                                             math.floor(0.7 * 887))

    def test_union_and_disjointness(self):
        sentences = make_sentences(37, 81)
        split = stratified_split(sentences, seed=5)
        ids = [s.id for part in (split.train, split.validation, split.test)
               for s in part]
        assert len(ids) == len(sentences)
        assert set(ids) == {s.id for s in sentences}

    def test_deterministic_per_seed(self):
        sentences = make_sentences(20, 40)
        a = stratified_split(sentences, seed=11)
        b = stratified_split(sentences, seed=11)
        assert [s.id for s in a.train] == [s.id for s in b.train]
        assert [s.id for s in a.validation] == [s.id for s in b.validation]
        assert [s.id for s in a.test] == [s.id for s in b.test]

    def test_different_seeds_differ(self):
        sentences = make_sentences(50, 50)
        a = stratified_split(sentences, seed=1)
        b = stratified_split(sentences, seed=2)
        assert [s.id for s in a.train] != [s.id for s in b.train]

    def test_random_sizes_stratified_within_one(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            n_causal = int(rng.integers(3, 2000))
            n_noncausal = int(rng.integers(3, 2000))
            sentences = make_sentences(n_causal, n_noncausal)
            split = stratified_split(sentences, seed=int(rng.integers(1e6)))
            for part, ratio in ((split.train, 0.70), (split.validation, 0.15),
                                (split.test, 0.15)):
                got_causal, got_noncausal = count_labels(part)
                assert abs(got_causal - round(ratio * n_causal)) <= 1
                assert abs(got_noncausal - round(ratio * n_noncausal)) <= 1
            total = (len(split.train) + len(split.validation) + len(split.test))
            assert total == len(sentences)

    def test_small_class_rejected(self):
        with pytest.raises(ValueError, match="causal"):
            stratified_split(make_sentences(2, 100), seed=0)
        with pytest.raises(ValueError, match="non_causal"):
            stratified_split(make_sentences(100, 2), seed=0)

    def test_bad_ratios_rejected(self):
        sentences = make_sentences(10, 10)
        with pytest.raises(ValueError, match="sum"):
            stratified_split(sentences, ratios=(0.5, 0.3, 0.3), seed=0)
        with pytest.raises(ValueError, match="positive"):
            stratified_split(sentences, ratios=(1.0, 0.0, 0.0), seed=0)

    def test_seed_and_ratios_recorded(self):
        split = stratified_split(make_sentences(10, 10), seed=42)
        assert split.seed == 42
        assert split.ratios == (0.70, 0.15, 0.15)
        assert isinstance(split, CorpusSplit)
