import pytest
from hypothesis import given
from hypothesis import strategies as st

from semfid.errors import EmptyLexicon
from semfid.linguistics import (
    CaptionRecord,
    NounLexicon,
    default_lexicon,
    extract_nouns,
    load_lexicon,
    normalize_label,
    tokenize,
)

LEX = NounLexicon(frozenset({"man", "television", "front", "hat"}))


@pytest.mark.parametrize(
    "text, expected",
    [
        (
            "A man is standing in front of a television.",
            ["a", "man", "is", "standing", "in", "front", "of", "a", "television"],
        ),
        ("", []),
        ("wii remote.", ["wii", "remote"]),
        ("  ...  \t(tv)\n", ["tv"]),
        ("O'Neil's  hat", ["o'neil's", "hat"]),
    ],
)
def test_tokenize(text, expected):
    assert tokenize(text) == expected


def test_extract_table1_image1():
    ext = extract_nouns(tokenize("A man is standing in front of a television."), LEX)
    assert ext.noun_tokens == ("man", "television")
    assert ext.distinct_nouns == ("man", "television")


def test_extract_duplicates():
    ext = extract_nouns(["a", "hat", "and", "a", "hat"], LEX)
    assert ext.noun_tokens == ("hat", "hat")
    assert ext.distinct_nouns == ("hat",)


def test_extract_empty():
    ext = extract_nouns([], LEX)
    assert ext.noun_tokens == () and ext.distinct_nouns == ()


@pytest.mark.parametrize(
    "label, expected",
    [
        ("Cellular Telephone", ["cellular", "telephone"]),
        ("safety_bicycle", ["safety", "bicycle"]),
        ("Dad", ["dad"]),
        ("dining-table ", ["dining", "table"]),
        ("(Beer Drinker)", ["beer", "drinker"]),
    ],
)
def test_normalize_label(label, expected):
    assert normalize_label(label) == expected


class TestLexicon:
    def test_plain(self):
        lex = load_lexicon(b"man\ntelevision\n")
        assert lex.nouns == {"man", "television"}

    def test_comment(self):
        assert load_lexicon(b"# header\nman\n").nouns == {"man"}

    def test_empty(self):
        with pytest.raises(EmptyLexicon):
            load_lexicon(b"")
        with pytest.raises(EmptyLexicon):
            load_lexicon(b"# only a comment\n\n")

    def test_lowercased_and_stop_override(self):
        lex = load_lexicon(b"Man\nTop\n", b"man\n")
        assert "man" not in lex and "top" in lex

    def test_default_stop_nouns(self):
        lex = load_lexicon(b"front\nman\n")
        assert "front" not in lex and "man" in lex

    def test_bundled(self):
        lex = default_lexicon()
        for word in ("man", "television", "kitchen", "bicycle"):
            assert word in lex
        assert "front" not in lex and "middle" not in lex


def test_caption_record_ids():
    with pytest.raises(ValueError):
        CaptionRecord("", "SAT", "x")
    with pytest.raises(ValueError):
        CaptionRecord("img", "", "x")
    assert CaptionRecord("img", "SAT", "").text == ""


words = st.sampled_from(["a", "man", "hat", "front", "television", "of", "dog"])


@given(st.lists(words, max_size=20))
def test_extract_is_subsequence(tokens):
    nouns = list(extract_nouns(tokens, LEX).noun_tokens)
    it = iter(tokens)
    assert all(any(n == t for t in it) for n in nouns)


@given(st.lists(words, max_size=20))
def test_extract_doubling(tokens):
    once = extract_nouns(tokens, LEX)
    twice = extract_nouns(tokens + tokens, LEX)
    assert len(twice.noun_tokens) == 2 * len(once.noun_tokens)
    assert twice.distinct_nouns == once.distinct_nouns


@given(st.text())
def test_tokenize_idempotent(text):
    tokens = tokenize(text)
    assert tokenize(" ".join(tokens)) == tokens


@given(st.text())
def test_normalize_label_clean_tokens(label):
    for tok in normalize_label(label):
        assert tok
        assert not any(c.isspace() for c in tok)
        assert "_" not in tok and "-" not in tok
