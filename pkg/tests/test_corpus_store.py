import json

import pytest

from causalsent.corpus import (DatasetCard, card_for, read_card,
                               read_sentences, read_split, stratified_split,
                               write_card, write_sentences, write_split)

from conftest import make_sentences


class TestSentenceRoundTrip:
    def test_identity(self, tmp_path):
        sentences = make_sentences(7, 9)
        path = tmp_path / "corpus.jsonl"
        write_sentences(path, sentences)
        assert read_sentences(path) == sentences

    def test_unicode_survives(self, tmp_path):
        sentences = make_sentences(3, 0)
        tricky = sentences[0].__class__(id="u-1", text='β-blockers — "quoted" 中文',
                                        label="causal", source="biocausal")
        path = tmp_path / "corpus.jsonl"
        write_sentences(path, [tricky] + sentences)
        loaded = read_sentences(path)
        assert loaded[0].text == 'β-blockers — "quoted" 中文'

    def test_golden_fixture_fields(self, tmp_path):
        path = tmp_path / "golden.jsonl"
        path.write_text(
            '{"id": "a-1", "text": "x causes y", "label": "causal", "source": "semeval"}\n'
            '{"id": "a-2", "text": "plain", "label": "non_causal", "source": "semeval"}\n'
            '{"id": "a-3", "text": "more", "label": "non_causal", "source": "semeval"}\n',
            encoding="utf-8")
        loaded = read_sentences(path)
        assert [s.id for s in loaded] == ["a-1", "a-2", "a-3"]
        assert loaded[0].text == "x causes y"
        assert loaded[0].label == "causal"
        assert loaded[0].source == "semeval"

    def test_duplicate_id_rejected(self, tmp_path):
        path = tmp_path / "dup.jsonl"
        record = '{"id": "a-1", "text": "x", "label": "causal", "source": "semeval"}\n'
        path.write_text(record + record, encoding="utf-8")
        with pytest.raises(ValueError, match="duplicate"):
            read_sentences(path)

    def test_wrong_fields_rejected(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"id": "a", "text": "x", "label": "causal"}\n',
                        encoding="utf-8")
        with pytest.raises(ValueError, match="fields"):
            read_sentences(path)

    def test_bad_label_rejected(self, tmp_path):
        path = tmp_path / "bad2.jsonl"
        path.write_text('{"id": "a", "text": "x", "label": "unknown", '
                        '"source": "semeval"}\n', encoding="utf-8")
        with pytest.raises(ValueError, match="label"):
            read_sentences(path)


class TestSplitRoundTrip:
    def test_identity(self, tmp_path):
        split = stratified_split(make_sentences(30, 60), seed=4)
        write_split(tmp_path / "split", split)
        loaded = read_split(tmp_path / "split")
        assert loaded.seed == split.seed
        assert loaded.ratios == split.ratios
        for part in ("train", "validation", "test"):
            assert getattr(loaded, part) == getattr(split, part)

    def test_bad_manifest_ratios_rejected(self, tmp_path):
        split = stratified_split(make_sentences(10, 20), seed=4)
        write_split(tmp_path / "split", split)
        manifest_path = tmp_path / "split" / "manifest.json"
        manifest = json.loads(manifest_path.read_text())
        manifest["ratios"] = [0.5, 0.3, 0.3]
        manifest_path.write_text(json.dumps(manifest))
        with pytest.raises(ValueError, match="sum"):
            read_split(tmp_path / "split")

    def test_id_in_two_parts_rejected(self, tmp_path):
        split = stratified_split(make_sentences(10, 20), seed=4)
        write_split(tmp_path / "split", split)
        train_path = tmp_path / "split" / "train.jsonl"
        test_path = tmp_path / "split" / "test.jsonl"
        first_test_line = test_path.read_text().splitlines()[0]
        train_path.write_text(train_path.read_text() + first_test_line + "\n")
        with pytest.raises(ValueError, match="more than one"):
            read_split(tmp_path / "split")


class TestDatasetCard:
    def test_round_trip(self, tmp_path):
        card = card_for("semeval", make_sentences(4, 11), subsample_target=8)
        write_card(tmp_path / "card.json", card)
        loaded = read_card(tmp_path / "card.json")
        assert loaded == DatasetCard(name="semeval", n_causal=4, n_noncausal=11,
                                     subsample_target=8)

    def test_counts_validated(self):
        with pytest.raises(ValueError):
            DatasetCard(name="x", n_causal=-1, n_noncausal=0)
        with pytest.raises(ValueError, match="subsample"):
            DatasetCard(name="x", n_causal=1, n_noncausal=3, subsample_target=4)
