#!/usr/bin/env python3
"""Compare the numba and numpy postings kernels on a synthetic collection.

    python benchmarks/bench_kernels.py --docs 10000 --repeat 20
"""
import argparse
import random
import time

import numpy as np

from patclir import _kernels
from patclir.corpus import Collection, Document
from patclir.index import build_index
from patclir.synthetic import random_collection_lines
from patclir.tokenize import tokenize_delimited


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--docs", type=int, default=10000)
    ap.add_argument("--tokens", type=int, default=100)
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--query-terms", type=int, default=10)
    args = ap.parse_args()

    rows = random_collection_lines(args.docs, args.tokens, seed=0)
    coll = Collection.from_documents(Document(r["doc_id"], r["lang"], r["text"]) for r in rows)
    t0 = time.perf_counter()
    idx = build_index(coll, tokenize_delimited)
    print(f"active backend: {_kernels.BACKEND}")
    print(f"build_index: {time.perf_counter() - t0:.2f} s  N={idx.N} V={len(idx)} postings={idx.docs.size}")

    rng = random.Random(0)
    term_ids = np.array(sorted(rng.sample(range(len(idx)), args.query_terms)), dtype=np.int64)
    q_weights = np.ones(len(term_ids))
    # a frequent term makes the accumulate loop touch most documents
    term_ids[0] = int(np.argmax(np.diff(idx.offsets)))
    N = float(idx.N)

    variants = {"numpy": (_kernels.posting_weights_np, _kernels.doc_norms_np, _kernels.accumulate_np)}
    if _kernels.NUMBA_ENABLED:
        variants["numba"] = (_kernels.posting_weights_nb, _kernels.doc_norms_nb, _kernels.accumulate_nb)

    print(f"{'kernel':<18}" + "".join(f"{name:>12}" for name in variants) + "  (best of %d, ms)" % args.repeat)
    results = {}
    for name, (pw, dn, acc) in variants.items():
        pw(idx.tf, idx.offsets, N)  # compile
        dn(idx.docs, idx.weights, idx.N)
        acc(idx.offsets, idx.docs, idx.weights, term_ids, q_weights, idx.N)
        results[name] = [
            best_of(lambda: pw(idx.tf, idx.offsets, N), args.repeat),
            best_of(lambda: dn(idx.docs, idx.weights, idx.N), args.repeat),
            best_of(lambda: acc(idx.offsets, idx.docs, idx.weights, term_ids, q_weights, idx.N), args.repeat),
        ]
    for i, label in enumerate(("posting_weights", "doc_norms", "accumulate")):
        print(f"{label:<18}" + "".join(f"{results[n][i] * 1000:>12.3f}" for n in variants))

    query = [idx.terms[t] for t in term_ids]
    idx.search(query)
    print(f"search (active backend): {best_of(lambda: idx.search(query), args.repeat) * 1000:.3f} ms")


if __name__ == "__main__":
    main()
