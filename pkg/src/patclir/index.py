"""Inverted index with TF-IDF weighting and cosine ranking.

Weights::

    tf  = 1 + ln(f_td)
    idf = ln(N / n_t)

Postings are stored in CSR form: ``offsets[t]:offsets[t+1]`` slices the
``docs``/``tf`` arrays for the term with id ``t``. Term ids follow sorted
term order, so two builds of the same collection are byte-identical.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from patclir import _binfmt, _kernels
from patclir.corpus import Collection
from patclir.tokenize import Tokenizer

MAGIC = b"PCLRIDX\x00"
FORMAT_VERSION = 1


def tf_weight(f_td: int) -> float:
    if f_td < 1:
        raise ValueError(f"term frequency must be >= 1, got {f_td}")
    return 1.0 + math.log(f_td)


def idf_weight(n_t: int, N: int) -> float:
    if not 1 <= n_t <= N:
        raise ValueError(f"need 1 <= n_t <= N, got n_t={n_t}, N={N}")
    return math.log(N / n_t)


class Posting(NamedTuple):
    doc_position: int
    f_td: int


@dataclass(frozen=True)
class RankedList:
    query_id: str
    hits: list[tuple[str, float]] = field(default_factory=list)

    def doc_ids(self) -> list[str]:
        return [d for d, _ in self.hits]

    def __len__(self) -> int:
        return len(self.hits)


class InvertedIndex:
    def __init__(self, doc_ids: Sequence[str], terms: Sequence[str], offsets, docs, tf, doc_norms=None, lang: str = ""):
        self.lang = lang
        self.doc_ids = list(doc_ids)
        self.terms = list(terms)
        self.offsets = np.asarray(offsets, dtype=np.int64)
        self.docs = np.asarray(docs, dtype=np.int32)
        self.tf = np.asarray(tf, dtype=np.int32)
        self.term_ids = {t: i for i, t in enumerate(self.terms)}
        self.weights = _kernels.posting_weights(self.tf, self.offsets, float(max(self.N, 1)))
        if doc_norms is None:
            doc_norms = _kernels.doc_norms(self.docs, self.weights, self.N)
        self.doc_norms = np.asarray(doc_norms, dtype=np.float64)
        # rank of each doc_id in byte order, used as the tie-breaker
        order = sorted(range(self.N), key=self.doc_ids.__getitem__)
        self.id_rank = np.empty(self.N, dtype=np.int64)
        self.id_rank[order] = np.arange(self.N)

    @property
    def N(self) -> int:
        return len(self.doc_ids)

    @property
    def vocabulary(self) -> frozenset[str]:
        return frozenset(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.term_ids

    def df(self, term: str) -> int:
        t = self.term_ids.get(term)
        if t is None:
            return 0
        return int(self.offsets[t + 1] - self.offsets[t])

    def postings(self, term: str) -> list[Posting]:
        t = self.term_ids.get(term)
        if t is None:
            return []
        lo, hi = self.offsets[t], self.offsets[t + 1]
        return [Posting(int(d), int(f)) for d, f in zip(self.docs[lo:hi], self.tf[lo:hi])]

    def query_vector(self, query_tokens: Iterable[str]) -> dict[str, float]:
        """TF-IDF weights of the query terms present in the index."""
        counts = Counter(query_tokens)
        return {
            term: tf_weight(c) * idf_weight(self.df(term), self.N)
            for term, c in sorted(counts.items())
            if term in self.term_ids
        }

    def search(self, query_tokens: Iterable[str], limit: int = 1000, query_id: str = "") -> RankedList:
        if limit < 1:
            raise ValueError("limit must be >= 1")
        qvec = self.query_vector(query_tokens)
        qnorm = math.sqrt(sum(w * w for w in qvec.values()))
        if qnorm == 0.0:
            return RankedList(query_id)
        term_ids = np.array([self.term_ids[t] for t in qvec], dtype=np.int64)
        q_weights = np.array(list(qvec.values()), dtype=np.float64)
        dots = _kernels.accumulate(self.offsets, self.docs, self.weights, term_ids, q_weights, self.N)
        cand = np.flatnonzero((dots > 0.0) & (self.doc_norms > 0.0))
        scores = np.minimum(dots[cand] / (qnorm * self.doc_norms[cand]), 1.0)
        order = np.lexsort((self.id_rank[cand], -scores))[:limit]
        return RankedList(
            query_id,
            [(self.doc_ids[cand[i]], float(scores[i])) for i in order.tolist()],
        )


def _count_documents(collection: Collection, tokenizer: Tokenizer) -> list[Counter]:
    return [Counter(tokenizer(doc.text)) for doc in collection]


def build_index(collection: Collection, tokenizer: Tokenizer) -> InvertedIndex:
    counts = _count_documents(collection, tokenizer)
    langs = {d.lang for d in collection}
    terms = sorted(set().union(*counts)) if counts else []
    term_id = {t: i for i, t in enumerate(terms)}
    t_col: list[int] = []
    d_col: list[int] = []
    f_col: list[int] = []
    for pos, c in enumerate(counts):
        for term, f in c.items():
            t_col.append(term_id[term])
            d_col.append(pos)
            f_col.append(f)
    t_arr = np.array(t_col, dtype=np.int64)
    order = np.argsort(t_arr, kind="stable")  # docs stay ascending within a term
    offsets = np.zeros(len(terms) + 1, dtype=np.int64)
    np.cumsum(np.bincount(t_arr, minlength=len(terms)), out=offsets[1:])
    return InvertedIndex(
        [d.doc_id for d in collection],
        terms,
        offsets,
        np.array(d_col, dtype=np.int32)[order],
        np.array(f_col, dtype=np.int32)[order],
        lang=next(iter(langs)) if len(langs) == 1 else "",
    )


def search(index: InvertedIndex, query_tokens: Iterable[str], limit: int = 1000, query_id: str = "") -> RankedList:
    return index.search(query_tokens, limit, query_id)


def save_index(index: InvertedIndex, path: str | Path) -> None:
    w = _binfmt.Writer()
    w.strings([index.lang])
    w.strings(index.doc_ids)
    w.strings(index.terms)
    w.array(index.offsets.astype("<i8"))
    w.array(index.docs.astype("<i4"))
    w.array(index.tf.astype("<i4"))
    w.array(index.doc_norms.astype("<f8"))
    _binfmt.write_file(path, MAGIC, FORMAT_VERSION, w.payload())


def load_index(path: str | Path) -> InvertedIndex:
    r = _binfmt.read_file(path, MAGIC, FORMAT_VERSION)
    header = r.strings()
    if len(header) != 1:
        raise _binfmt.FormatError(f"{path}: bad index header")
    lang = header[0]
    doc_ids = r.strings()
    terms = r.strings()
    offsets = r.array("<i8")
    docs = r.array("<i4")
    tf = r.array("<i4")
    norms = r.array("<f8")
    r.done()
    n = len(doc_ids)
    if (
        offsets.shape[0] != len(terms) + 1
        or offsets[0] != 0
        or offsets[-1] != docs.shape[0]
        or np.any(np.diff(offsets) < 0)
        or tf.shape != docs.shape
        or norms.shape[0] != n
        or (docs.size and (docs.min() < 0 or docs.max() >= n))
        or (tf.size and tf.min() < 1)
    ):
        raise _binfmt.FormatError(f"{path}: inconsistent index structure")
    return InvertedIndex(doc_ids, terms, offsets, docs, tf, norms, lang=lang)


def format_run_lines(ranked: RankedList, tag: str) -> list[str]:
    return [
        f"{ranked.query_id}\t{doc_id}\t{rank}\t{score:.6f}\t{tag}"
        for rank, (doc_id, score) in enumerate(ranked.hits, 1)
    ]


def write_run(ranked_lists: Iterable[RankedList], path: str | Path, tag: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for ranked in ranked_lists:
            for line in format_run_lines(ranked, tag):
                fh.write(line + "\n")
