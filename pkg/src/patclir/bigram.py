"""Adjacent content-word pair counts from a target-language corpus."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from patclir import _binfmt
from patclir.corpus import Collection
from patclir.errors import FormatError
from patclir.tokenize import Tokenizer

MAGIC = b"PCLRBGM\x00"
FORMAT_VERSION = 1


@dataclass
class BigramModel:
    counts: Counter = field(default_factory=Counter)
    unigrams: Counter = field(default_factory=Counter)

    @property
    def total_bigrams(self) -> int:
        return sum(self.counts.values())

    def count(self, w1: str, w2: str) -> int:
        return self.counts.get((w1, w2), 0)

    def add_stream(self, tokens: list[str]) -> None:
        self.unigrams.update(tokens)
        self.counts.update(zip(tokens, tokens[1:]))

    def merge(self, other: "BigramModel") -> "BigramModel":
        return BigramModel(self.counts + other.counts, self.unigrams + other.unigrams)

    def __add__(self, other: "BigramModel") -> "BigramModel":
        return self.merge(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BigramModel):
            return NotImplemented
        return dict(self.counts) == dict(other.counts) and dict(self.unigrams) == dict(other.unigrams)


def extract_bigrams(collection: Collection | Iterable, tokenizer: Tokenizer) -> BigramModel:
    model = BigramModel()
    for doc in collection:
        model.add_stream(tokenizer(doc.text))
    return model


def pair_score(model: BigramModel, w1: str, w2: str) -> float:
    return math.log(model.count(w1, w2) + 1)


def save_model(model: BigramModel, path: str | Path) -> None:
    vocab = sorted(set(model.unigrams) | {w for pair in model.counts for w in pair})
    ids = {w: i for i, w in enumerate(vocab)}
    pairs = sorted(model.counts.items(), key=lambda kv: (ids[kv[0][0]], ids[kv[0][1]]))
    w = _binfmt.Writer()
    w.strings(vocab)
    w.array(np.array([model.unigrams.get(v, 0) for v in vocab], dtype="<i8"))
    w.array(np.array([ids[a] for (a, _), _ in pairs], dtype="<i4"))
    w.array(np.array([ids[b] for (_, b), _ in pairs], dtype="<i4"))
    w.array(np.array([c for _, c in pairs], dtype="<i8"))
    w.u64(model.total_bigrams)
    _binfmt.write_file(path, MAGIC, FORMAT_VERSION, w.payload())


def load_model(path: str | Path) -> BigramModel:
    r = _binfmt.read_file(path, MAGIC, FORMAT_VERSION)
    vocab = r.strings()
    uni = r.array("<i8")
    left = r.array("<i4")
    right = r.array("<i4")
    cnt = r.array("<i8")
    total = r.u64()
    r.done()
    n = len(vocab)
    if uni.shape[0] != n or not (left.shape == right.shape == cnt.shape):
        raise FormatError(f"{path}: inconsistent bigram tables")
    if cnt.size and (cnt.min() < 1 or min(left.min(), right.min()) < 0 or max(left.max(), right.max()) >= n):
        raise FormatError(f"{path}: invalid bigram entries")
    model = BigramModel(
        Counter({(vocab[a], vocab[b]): c for a, b, c in zip(left.tolist(), right.tolist(), cnt.tolist())}),
        Counter({v: c for v, c in zip(vocab, uni.tolist()) if c > 0}),
    )
    if model.total_bigrams != total:
        raise FormatError(f"{path}: total_bigrams mismatch")
    return model


def dump_tsv(model: BigramModel, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for (a, b), c in sorted(model.counts.items()):
            fh.write(f"{a}\t{b}\t{c}\n")
