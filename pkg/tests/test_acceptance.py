"""Exit criteria, one test per criterion; see the terminal summary for the PASS/FAIL lines."""
import json
import random
import time

import pytest

from oracles import (
    IDF_TABLE,
    TF_TABLE,
    dense_cosine_ranking,
    enumerate_best_path,
    make_collection,
    naive_ap,
    split_tokenizer,
)
from patclir.bigram import BigramModel
from patclir.corpus import Collection, Document
from patclir.evaluation import EvalReport, QueryResult, average_precision, compare
from patclir.index import build_index, idf_weight, search, tf_weight
from patclir.synthetic import random_collection_lines, run_experiment
from patclir.tokenize import tokenize_delimited
from patclir.translate import disambiguate
from test_translate import random_lattice


@pytest.fixture
def criterion(record_property):
    def _name(text):
        record_property("criterion", text)
    return _name


def test_weight_formula_exactness(criterion):
    criterion("weights: 20 TF/IDF cases match 1 + ln f and ln(N/n) to 1e-12")
    assert len(TF_TABLE) + len(IDF_TABLE) == 20
    for f, expected in TF_TABLE:
        assert abs(tf_weight(f) - expected) <= 1e-12
    for n, N, expected in IDF_TABLE:
        assert abs(idf_weight(n, N) - expected) <= 1e-12


def test_cosine_oracle(criterion):
    criterion("cosine: 200 random collections equal dense cosine (order, scores 1e-9) in < 5 s")
    rng = random.Random(2024)
    start = time.perf_counter()
    for _ in range(200):
        vocab = [f"w{i}" for i in range(rng.randint(1, 30))]
        docs = [rng.choices(vocab, k=rng.randint(1, 15)) for _ in range(rng.randint(1, 20))]
        query = rng.choices(vocab + ["oov"], k=rng.randint(1, 8))
        idx = build_index(make_collection([" ".join(d) for d in docs]), split_tokenizer)
        got = search(idx, query, 1000).hits
        want = dense_cosine_ranking(docs, [f"d{i}" for i in range(len(docs))], query)
        assert [d for d, _ in got] == [d for d, _ in want]
        assert all(abs(a - b) <= 1e-9 for (_, a), (_, b) in zip(got, want))
    assert time.perf_counter() - start < 5.0


def test_ap_oracle(criterion):
    criterion("AP: 1000 random instances equal a naive rank walk to 1e-12; ranks {1,3} of R=2 -> 0.833333, < 5 s")
    assert abs(average_precision(["r1", "n", "r2"], {"r1", "r2"}) - 0.833333) < 1e-6
    rng = random.Random(99)
    start = time.perf_counter()
    for _ in range(1000):
        docs = [f"d{i}" for i in range(rng.randint(1, 12))]
        rng.shuffle(docs)
        ranked = docs[: rng.randint(0, len(docs))]
        relevant = set(rng.sample(docs, rng.randint(1, min(5, len(docs)))))
        assert abs(average_precision(ranked, relevant) - naive_ap(ranked, relevant)) <= 1e-12
    assert time.perf_counter() - start < 5.0


def test_disambiguation_oracle(criterion):
    criterion("disambiguation: 500 random lattices, DP path and score equal exhaustive enumeration, < 5 s")
    rng = random.Random(7)
    start = time.perf_counter()
    for _ in range(500):
        lat, model = random_lattice(rng)
        res = disambiguate(lat, model, 1)
        score, texts = enumerate_best_path(lat, model)
        assert tuple(c[0].text for c in res.chosen) == texts
        assert res.path_score == score
    assert time.perf_counter() - start < 5.0


def test_published_ratio_arithmetic(criterion):
    criterion("published ratios: compare() on 0.4151/0.3156/0.2709 gives 0.7603 and 0.6526 within 1e-4")

    def rep(tag, ap):
        return EvalReport(tag, {q: QueryResult(ap, [ap] * 11, 1, 1, 1) for q in ("q1", "q2", "q3")})

    jj = rep("JJ", 0.4151)
    assert abs(compare(rep("JEDIS", 0.3156), jj) - 0.7603) <= 1e-4
    assert abs(compare(rep("JEALL", 0.2709), jj) - 0.6526) <= 1e-4


def test_synthetic_experiment_ordering(criterion, tmp_path, fixture_dir):
    criterion("synthetic experiment: mean AP MONO >= DIS(k=1) > ALL, < 10 s")
    n_docs = sum(1 for _ in open(fixture_dir / "docs_en.jsonl", encoding="utf-8"))
    n_stats = sum(1 for _ in open(fixture_dir / "stats_en.jsonl", encoding="utf-8"))
    assert 40 <= n_docs <= 60 and 150 <= n_stats <= 250
    start = time.perf_counter()
    paths = run_experiment(tmp_path / "exp", fixture_dir, k=1)
    elapsed = time.perf_counter() - start
    doc = json.loads(paths["report"].read_text())
    mean = {m["tag"]: m["mean_ap"] for m in doc["methods"]}
    print(f"mean AP: {mean}  ({elapsed:.2f} s)")
    assert mean["JJ"] >= mean["JEDIS"] > mean["JEALL"]
    assert elapsed < 10.0


def test_end_to_end_determinism(criterion, tmp_path, fixture_dir):
    criterion("determinism: two end-to-end runs give byte-identical indexes, run files, reports")
    a = run_experiment(tmp_path / "a", fixture_dir)
    b = run_experiment(tmp_path / "b", fixture_dir)
    for key in ("en_index", "ja_index", "bigrams", "report", "curve"):
        assert a[key].read_bytes() == b[key].read_bytes(), key
    for ra, rb in zip(a["runs"], b["runs"]):
        assert ra.read_bytes() == rb.read_bytes(), ra.name


@pytest.mark.slow
def test_desk_scale_performance(criterion):
    criterion("performance: index 10,000 x ~100-token docs in < 30 s; one search < 100 ms")
    rows = random_collection_lines(10_000, 100, seed=1)
    coll = Collection.from_documents(Document(r["doc_id"], r["lang"], r["text"]) for r in rows)
    start = time.perf_counter()
    idx = build_index(coll, tokenize_delimited)
    build_time = time.perf_counter() - start
    rng = random.Random(3)
    queries = [rng.sample(idx.terms, 8) + ["t0", "t1"] for _ in range(20)]
    idx.search(queries[0], 1000)  # first call may JIT-compile
    worst = 0.0
    for q in queries:
        t0 = time.perf_counter()
        ranked = idx.search(q, 1000)
        worst = max(worst, time.perf_counter() - t0)
        assert ranked.hits
    print(f"build {build_time:.2f} s, worst search {worst * 1000:.1f} ms, N={idx.N}, V={len(idx)}")
    assert build_time < 30.0
    assert worst < 0.1
