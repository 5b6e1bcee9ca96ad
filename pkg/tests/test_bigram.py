import math
import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from oracles import make_collection, split_tokenizer
from patclir.bigram import BigramModel, dump_tsv, extract_bigrams, load_model, pair_score, save_model
from patclir.errors import FormatError


def test_hand_count():
    m = extract_bigrams(make_collection(["a b a"]), split_tokenizer)
    assert dict(m.counts) == {("a", "b"): 1, ("b", "a"): 1}
    assert m.total_bigrams == 2
    assert dict(m.unigrams) == {"a": 2, "b": 1}


def test_single_token_doc():
    m = extract_bigrams(make_collection(["solo"]), split_tokenizer)
    assert m.total_bigrams == 0 and dict(m.unigrams) == {"solo": 1}


def test_document_boundaries_respected():
    m = extract_bigrams(make_collection(["a b", "b c"]), split_tokenizer)
    assert m.count("b", "b") == 0
    assert set(m.counts) == {("a", "b"), ("b", "c")}


@pytest.mark.parametrize("count, expected", [(0, 0.0), (1, 0.6931471805599453), (9, 2.302585092994046)])
def test_pair_score(count, expected):
    m = BigramModel(Counter({("x", "y"): count}) if count else Counter())
    assert pair_score(m, "x", "y") == pytest.approx(expected, abs=1e-12)


@given(st.integers(0, 10**6))
def test_pair_score_monotone(c):
    lo = BigramModel(Counter({("x", "y"): c}) if c else Counter())
    hi = BigramModel(Counter({("x", "y"): c + 1}))
    assert 0.0 <= pair_score(lo, "x", "y") < pair_score(hi, "x", "y")


docs_st = st.lists(st.lists(st.sampled_from("abcde"), max_size=8).map(" ".join).filter(str.strip), max_size=6)


@given(docs_st, docs_st)
def test_extraction_is_mergeable(left, right):
    a = extract_bigrams(make_collection(left), split_tokenizer)
    b = extract_bigrams(make_collection(right), split_tokenizer)
    both = extract_bigrams(make_collection(left + right), split_tokenizer)
    assert both == a + b
    assert both.total_bigrams == sum(both.counts.values())


def random_model(seed):
    rng = random.Random(seed)
    texts = [" ".join(rng.choices(["α", "b", "c", "日本", "e"], k=rng.randint(1, 10))) for _ in range(30)]
    return extract_bigrams(make_collection(texts), split_tokenizer)


def test_round_trip(tmp_path):
    m = random_model(1)
    save_model(m, tmp_path / "b.bin")
    again = load_model(tmp_path / "b.bin")
    assert again.total_bigrams == m.total_bigrams
    assert again == m
    rng = random.Random(2)
    for pair in rng.sample(sorted(m.counts), 5):
        assert again.count(*pair) == m.count(*pair)
        assert pair_score(again, *pair) == pair_score(m, *pair)


def test_corruption_detected(tmp_path):
    save_model(random_model(3), tmp_path / "b.bin")
    data = bytearray((tmp_path / "b.bin").read_bytes())
    data[len(data) // 2] ^= 0x01
    (tmp_path / "b.bin").write_bytes(bytes(data))
    with pytest.raises(FormatError):
        load_model(tmp_path / "b.bin")


def test_tsv_dump(tmp_path):
    m = extract_bigrams(make_collection(["a b a b"]), split_tokenizer)
    dump_tsv(m, tmp_path / "b.tsv")
    assert (tmp_path / "b.tsv").read_text() == "a\tb\t2\nb\ta\t1\n"
