"""Content selection, tokenization, stop-word removal and preprocessing."""

import re

import pytest
from hypothesis import given, strategies as st

from sbrkit.textprep import (
    ContentVariant,
    default_stoplist,
    load_stoplist,
    parse_content_variant,
    preprocess,
    remove_stopwords,
    select_content,
    tokenize,
)

from conftest import make_report


class TestSelectContent:
    def test_combined_joins_with_single_space(self):
        report = make_report(title="crash on login", description="stack trace follows")
        got = select_content(report, ContentVariant.TITLE_PLUS_DESCRIPTION)
        assert got == "crash on login stack trace follows"

    def test_title_projection_can_be_empty(self):
        report = make_report(title="", description="d")
        assert select_content(report, ContentVariant.TITLE) == ""

    def test_combined_trims_empty_suffix(self):
        report = make_report(title="t", description="")
        assert select_content(report, ContentVariant.TITLE_PLUS_DESCRIPTION) == "t"

    def test_combined_trims_empty_prefix(self):
        report = make_report(title="", description="d")
        assert select_content(report, ContentVariant.TITLE_PLUS_DESCRIPTION) == "d"

    def test_description_projection(self):
        report = make_report(title="t", description="d")
        assert select_content(report, ContentVariant.DESCRIPTION) == "d"


def test_parse_content_variant_accepts_both_alias():
    assert parse_content_variant("both") is ContentVariant.TITLE_PLUS_DESCRIPTION
    assert parse_content_variant("title") is ContentVariant.TITLE
    assert parse_content_variant("Title-Plus-Description") is ContentVariant.TITLE_PLUS_DESCRIPTION
    with pytest.raises(ValueError):
        parse_content_variant("summary")


class TestTokenize:
    def test_lowercases_and_splits_on_punctuation(self):
        assert tokenize("Buffer overflow in DTLS!") == ["buffer", "overflow", "in", "dtls"]

    def test_digit_only_fragments_dropped(self):
        assert tokenize("CVE-2014-3579") == ["cve"]

    def test_empty_input(self):
        assert tokenize("") == []

    def test_mixed_alphanumerics_kept(self):
        assert tokenize("x509 parsing, utf8!") == ["x509", "parsing", "utf8"]

    @given(st.text(max_size=200))
    def test_tokens_are_lowercase_alnum_with_a_letter(self, text):
        for token in tokenize(text):
            assert re.fullmatch(r"[a-z0-9]+", token)
            assert re.search(r"[a-z]", token)


class TestStopwords:
    def test_default_list_removes_function_words(self):
        assert remove_stopwords(["this", "is", "a", "crash"], default_stoplist()) == ["crash"]

    def test_empty_input(self):
        assert remove_stopwords([], default_stoplist()) == []

    def test_empty_stoplist_is_identity(self):
        assert remove_stopwords(["crash"], frozenset()) == ["crash"]

    def test_default_list_has_documented_examples(self):
        stoplist = default_stoplist()
        assert {"as", "is", "would", "the", "of", "and"} <= stoplist

    def test_load_stoplist_skips_comments(self, tmp_path):
        path = tmp_path / "stop.txt"
        path.write_text("# comment\nfoo\n\nbar\n", encoding="utf-8")
        assert load_stoplist(path) == frozenset({"foo", "bar"})

    @given(st.lists(st.sampled_from(["a", "bb", "crash", "is", "the"]), max_size=30))
    def test_removal_yields_subsequence(self, tokens):
        kept = remove_stopwords(tokens, default_stoplist())
        it = iter(tokens)
        assert all(any(token == candidate for candidate in it) for token in kept)


class TestPreprocess:
    def test_pipeline_composes_stages(self):
        # By hand: tokenize -> [crashes, when, parsing]; "when" is a stop
        # word; crashes -> crash, parsing -> pars under the stemmer oracle.
        report = make_report(title="Crashes when parsing", description="ignored")
        assert preprocess(report, ContentVariant.TITLE) == ["crash", "pars"]

    def test_empty_report_yields_no_tokens(self):
        report = make_report(title="", description="")
        assert preprocess(report, ContentVariant.TITLE_PLUS_DESCRIPTION) == []

    def test_all_stopword_title(self):
        report = make_report(title="the of and", description="x")
        assert preprocess(report, ContentVariant.TITLE) == []

    def test_independent_of_label_and_timestamps(self):
        a = make_report(title="Heap overflow crash", label="security")
        b = make_report(
            title="Heap overflow crash",
            label="non-security",
            created_at=5,
            closed_at=9,
        )
        variant = ContentVariant.TITLE
        assert preprocess(a, variant) == preprocess(b, variant)

    def test_custom_stoplist(self):
        report = make_report(title="alpha beta gamma")
        assert preprocess(report, ContentVariant.TITLE, frozenset({"beta"})) == ["alpha", "gamma"]

    def test_tokens_with_digits_not_stemmed(self):
        report = make_report(title="lib003 crashes")
        assert preprocess(report, ContentVariant.TITLE) == ["lib003", "crash"]
