import pytest
from hypothesis import given, strategies as st

from patclir.errors import ValidationError
from patclir.tokenize import (
    LemmaTable,
    SegmentLexicon,
    StopwordList,
    load_lemmas,
    load_lexicon,
    load_stopwords,
    make_tokenizer,
    segment,
    tokenize_delimited,
    tokenize_segmented,
)

C, F = "content", "function"


def test_delimited_lemmas():
    lemmas = LemmaTable({"eliminating": "eliminate", "dioxins": "dioxin"})
    assert tokenize_delimited("Eliminating dioxins", StopwordList(frozenset()), lemmas) == ["eliminate", "dioxin"]


def test_delimited_stopwords_case_insensitive():
    assert tokenize_delimited("the The THE", StopwordList(frozenset({"the"}))) == []


def test_delimited_empty():
    assert tokenize_delimited("") == []


def test_delimited_keeps_numbers_and_splits_punctuation():
    assert tokenize_delimited("Model X-200, 3.5mm/s") == ["model", "x", "200", "3", "5mm", "s"]


def test_segmented_longest_match():
    lex = SegmentLexicon({"ab": C, "abc": C, "d": C})
    assert tokenize_segmented("abcd", lex) == ["abc", "d"]


def test_segmented_drops_function_words():
    assert tokenize_segmented("xy", SegmentLexicon({"x": F, "y": C})) == ["y"]


def test_segmented_single_char_fallback():
    assert tokenize_segmented("q", SegmentLexicon({"z": C})) == ["q"]


def test_segmented_whitespace_is_not_a_token():
    lex = SegmentLexicon({"樹脂": C})
    assert tokenize_segmented("樹脂 樹脂", lex) == ["樹脂", "樹脂"]
    assert [s.kind for s in segment("樹脂 x", lex)] == [C, "space", "fallback"]


def test_resource_loaders(tmp_path):
    (tmp_path / "lex.tsv").write_text("走行\tcontent\nの\tfunction\n", encoding="utf-8")
    lex = load_lexicon(tmp_path / "lex.tsv")
    assert lex.entries == {"走行": C, "の": F}

    (tmp_path / "bad.tsv").write_text("x\tverbish\n")
    with pytest.raises(ValidationError, match=r":1: unknown class"):
        load_lexicon(tmp_path / "bad.tsv")

    (tmp_path / "sw.txt").write_text("the\nOf\n")
    assert load_stopwords(tmp_path / "sw.txt").words == {"the", "of"}
    (tmp_path / "sw2.txt").write_text("the\nin the\n")
    with pytest.raises(ValidationError, match=r":2: stopword contains whitespace"):
        load_stopwords(tmp_path / "sw2.txt")

    (tmp_path / "lem.tsv").write_text("Systems\tsystem\nran\n")
    with pytest.raises(ValidationError, match=r":2:"):
        load_lemmas(tmp_path / "lem.tsv")


def test_invariants_enforced_on_construction():
    with pytest.raises(ValidationError):
        StopwordList(frozenset({"The"}))
    with pytest.raises(ValidationError):
        LemmaTable({"ran": ""})
    with pytest.raises(ValidationError):
        SegmentLexicon({"": C})


def test_make_tokenizer_requires_lexicon_for_segmented_langs():
    with pytest.raises(ValidationError, match="lexicon"):
        make_tokenizer("ja")
    assert make_tokenizer("en")("Hello World") == ["hello", "world"]


# --- properties ---------------------------------------------------------------

alphabet = st.sampled_from("abcde ")
lexicons = st.dictionaries(
    st.text("abcd", min_size=1, max_size=4), st.sampled_from([C, F]), min_size=1, max_size=10
)


@given(st.text(alphabet, max_size=30), lexicons)
def test_segments_reconstruct_input(text, entries):
    lex = SegmentLexicon(entries)
    assert "".join(s.surface for s in segment(text, lex)) == text


@given(st.text(alphabet, max_size=30), lexicons)
def test_segmentation_is_deterministic(text, entries):
    lex = SegmentLexicon(entries)
    assert tokenize_segmented(text, lex) == tokenize_segmented(text, SegmentLexicon(dict(entries)))


@given(st.text("abcd", min_size=2, max_size=5), st.text("abcd", max_size=10), st.data())
def test_longest_match_dominance(word, tail, data):
    cut = data.draw(st.integers(1, len(word) - 1))
    lex = SegmentLexicon({word: C, word[:cut]: C})
    assert segment(word + tail, lex)[0].surface != word[:cut]


@given(st.text(st.characters(codec="utf-8"), max_size=40))
def test_delimited_tokens_nonempty_and_not_stopwords(text):
    sw = StopwordList(frozenset({"a", "the"}))
    for tok in tokenize_delimited(text, sw):
        assert tok and tok not in sw
