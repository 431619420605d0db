import pytest

from causalsent.corpus import (CAUSAL, NON_CAUSAL, ParseError, count_labels,
                               parse_biocausal, parse_causal_timebank,
                               parse_event_storyline, parse_semeval)

from conftest import BIOCAUSAL_FIXTURE, SEMEVAL_FIXTURE


class TestSemeval:
    def test_fixture_labels_and_tag_stripping(self, semeval_file):
        sentences = parse_semeval(semeval_file)
        assert [s.label for s in sentences] == [CAUSAL, NON_CAUSAL]
        for s in sentences:
            assert "<e1>" not in s.text and "</e1>" not in s.text
            assert "<e2>" not in s.text and "</e2>" not in s.text
            assert not s.text.startswith('"')
        assert sentences[0].text == "The fire was started by a careless camper."
        assert sentences[0].id == "semeval-1"
        assert all(s.source == "semeval" for s in sentences)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("", encoding="utf-8")
        assert parse_semeval(path) == []

    def test_missing_relation_line(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text('1\t"A <e1>b</e1> of <e2>c</e2>."\n\n', encoding="utf-8")
        with pytest.raises(ParseError, match="record 1"):
            parse_semeval(path)

    def test_unbalanced_tags(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text('1\t"A <e1>b of <e2>c</e2>."\nOther\nComment:\n',
                        encoding="utf-8")
        with pytest.raises(ParseError, match="record 1"):
            parse_semeval(path)

    def test_cause_effect_direction_does_not_matter(self, tmp_path):
        records = ('1\t"<e1>a</e1> vs <e2>b</e2>."\nCause-Effect(e1,e2)\nComment:\n'
                   '\n'
                   '2\t"<e1>c</e1> vs <e2>d</e2>."\nCause-Effect(e2,e1)\nComment:\n')
        path = tmp_path / "both.txt"
        path.write_text(records, encoding="utf-8")
        assert all(s.label == CAUSAL for s in parse_semeval(path))


class TestCausalTimebank:
    def test_fixture_counts(self, causaltb_dir):
        sentences = parse_causal_timebank(causaltb_dir)
        # fixture_a: 3 sentences, one intra-sentence CLINK -> 1 causal;
        # fixture_cross: cross-sentence CLINK discarded -> 0 causal;
        # fixture_signal: C-SIGNAL marks its sentence -> 1 causal
        assert len(sentences) == 7
        n_causal, _ = count_labels(sentences)
        assert n_causal == 2

    def test_intra_sentence_clink(self, causaltb_dir):
        sentences = {s.id: s for s in parse_causal_timebank(causaltb_dir)}
        assert sentences["causaltb-fixture_a-s0"].label == CAUSAL
        assert sentences["causaltb-fixture_a-s1"].label == NON_CAUSAL
        assert sentences["causaltb-fixture_a-s2"].label == NON_CAUSAL

    def test_cross_sentence_clink_discarded(self, causaltb_dir):
        sentences = {s.id: s for s in parse_causal_timebank(causaltb_dir)}
        assert sentences["causaltb-fixture_cross-s0"].label == NON_CAUSAL
        assert sentences["causaltb-fixture_cross-s1"].label == NON_CAUSAL

    def test_c_signal_marks_sentence(self, causaltb_dir):
        sentences = {s.id: s for s in parse_causal_timebank(causaltb_dir)}
        assert sentences["causaltb-fixture_signal-s0"].label == CAUSAL
        assert sentences["causaltb-fixture_signal-s1"].label == NON_CAUSAL

    def test_tokens_joined_with_single_spaces(self, causaltb_dir):
        sentences = {s.id: s for s in parse_causal_timebank(causaltb_dir)}
        assert sentences["causaltb-fixture_a-s0"].text == "Heavy rain caused floods"

    def test_dangling_token_reference(self, tmp_path):
        doc = """<Document doc_name="bad">
<token t_id="1" sentence="0" number="0">word</token>
<Markables><EVENT m_id="1"><token_anchor t_id="99"/></EVENT></Markables>
<Relations></Relations>
</Document>"""
        root = tmp_path / "bad"
        root.mkdir()
        (root / "bad.xml").write_text(doc, encoding="utf-8")
        with pytest.raises(ParseError, match="99"):
            parse_causal_timebank(root)

    def test_dangling_markable_reference(self, tmp_path):
        doc = """<Document doc_name="bad2">
<token t_id="1" sentence="0" number="0">word</token>
<Markables><EVENT m_id="1"><token_anchor t_id="1"/></EVENT></Markables>
<Relations><CLINK r_id="r1"><source m_id="1"/><target m_id="7"/></CLINK></Relations>
</Document>"""
        root = tmp_path / "bad2"
        root.mkdir()
        (root / "bad2.xml").write_text(doc, encoding="utf-8")
        with pytest.raises(ParseError, match="7"):
            parse_causal_timebank(root)

    def test_unreadable_xml(self, tmp_path):
        root = tmp_path / "broken"
        root.mkdir()
        (root / "broken.xml").write_text("<Document><token", encoding="utf-8")
        with pytest.raises(ParseError, match="unreadable"):
            parse_causal_timebank(root)


class TestEventStoryline:
    def test_caused_by_link_marks_one_sentence(self, eventsl_dir):
        sentences = parse_event_storyline(eventsl_dir)
        assert len(sentences) == 2
        by_id = {s.id: s for s in sentences}
        assert by_id["eventsl-fixture_esl-s0"].label == CAUSAL
        assert by_id["eventsl-fixture_esl-s1"].label == NON_CAUSAL
        assert all(s.source == "eventsl" for s in sentences)

    def test_non_causal_plot_link_ignored(self, tmp_path):
        doc = """<Document doc_name="plain">
<token t_id="1" sentence="0" number="0">a</token>
<token t_id="2" sentence="0" number="1">b</token>
<Markables>
<EVENT m_id="1"><token_anchor t_id="1"/></EVENT>
<EVENT m_id="2"><token_anchor t_id="2"/></EVENT>
</Markables>
<Relations>
<PLOT_LINK r_id="p1" relType="PRECONDITION"><source m_id="1"/><target m_id="2"/></PLOT_LINK>
</Relations>
</Document>"""
        root = tmp_path / "plain"
        root.mkdir()
        (root / "plain.xml").write_text(doc, encoding="utf-8")
        sentences = parse_event_storyline(root)
        assert all(s.label == NON_CAUSAL for s in sentences)

    def test_causal_value_in_other_attribute(self, tmp_path):
        # some releases carry the CAUSES mark in a dedicated attribute
        doc = """<Document doc_name="attr">
<token t_id="1" sentence="0" number="0">a</token>
<token t_id="2" sentence="0" number="1">b</token>
<Markables>
<EVENT m_id="1"><token_anchor t_id="1"/></EVENT>
<EVENT m_id="2"><token_anchor t_id="2"/></EVENT>
</Markables>
<Relations>
<PLOT_LINK r_id="p1" relType="PRECONDITION" SIGNAL="CAUSES"><source m_id="1"/><target m_id="2"/></PLOT_LINK>
</Relations>
</Document>"""
        root = tmp_path / "attr"
        root.mkdir()
        (root / "attr.xml").write_text(doc, encoding="utf-8")
        sentences = parse_event_storyline(root)
        assert sentences[0].label == CAUSAL


class TestBiocausal:
    def test_fixture_counts(self, biocausal_file):
        sentences = parse_biocausal(biocausal_file)
        assert count_labels(sentences) == (2, 2)
        assert all(s.source == "biocausal" for s in sentences)

    def test_header_only_file(self, tmp_path):
        path = tmp_path / "header.csv"
        path.write_text("sentence,label\n", encoding="utf-8")
        assert parse_biocausal(path) == []

    def test_tab_delimited_without_header(self, tmp_path):
        path = tmp_path / "plain.tsv"
        path.write_text("Smoking causes cancer\t1\n"
                        "Paris is in France\t0\n", encoding="utf-8")
        sentences = parse_biocausal(path)
        assert count_labels(sentences) == (1, 1)

    def test_text_label_variant(self, tmp_path):
        path = tmp_path / "words.csv"
        path.write_text("label,sentence\ncausal,a causes b\nnon_causal,c and d\n",
                        encoding="utf-8")
        sentences = parse_biocausal(path)
        assert [s.label for s in sentences] == [CAUSAL, NON_CAUSAL]

    def test_missing_label_is_an_error(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("sentence,label\nno label here\n", encoding="utf-8")
        with pytest.raises(ParseError, match="row 2"):
            parse_biocausal(path)

    def test_empty_sentence_is_an_error(self, tmp_path):
        path = tmp_path / "bad2.csv"
        path.write_text("sentence,label\n,1\n", encoding="utf-8")
        with pytest.raises(ParseError, match="row 2"):
            parse_biocausal(path)

    def test_unrecognized_label_is_an_error(self, tmp_path):
        path = tmp_path / "bad3.csv"
        path.write_text("sentence,label\nwords,maybe\n", encoding="utf-8")
        with pytest.raises(ParseError, match="maybe"):
            parse_biocausal(path)


class TestParserInvariants:
    def test_no_markup_leaks_into_text(self, semeval_file, causaltb_dir,
                                       eventsl_dir, biocausal_file):
        everything = (parse_semeval(semeval_file)
                      + parse_causal_timebank(causaltb_dir)
                      + parse_event_storyline(eventsl_dir)
                      + parse_biocausal(biocausal_file))
        assert everything
        for s in everything:
            assert s.label in (CAUSAL, NON_CAUSAL)
            assert s.text.strip()
            for fragment in ("<e1>", "</e1>", "<e2>", "</e2>", "<token", "</"):
                assert fragment not in s.text

    def test_ids_unique_per_parser(self, causaltb_dir):
        sentences = parse_causal_timebank(causaltb_dir)
        assert len({s.id for s in sentences}) == len(sentences)


# Full-corpus counts: exercised in test_acceptance when CAUSALSENT_DATA is set.
