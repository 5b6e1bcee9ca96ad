"""Query translation: dictionary lookup, transliteration fallback, and
bigram-based disambiguation over the resulting candidate lattice.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Collection as AbstractSet, Iterable, NamedTuple, Sequence

from patclir.bigram import BigramModel
from patclir.errors import ValidationError

DICTIONARY = "dictionary"
TRANSLITERATION = "transliteration"
PASSTHROUGH = "passthrough"

ALL = "ALL"
DIS = "DIS"


class TranslationDictionary:
    """Source phrase (tuple of tokens) -> ordered, de-duplicated translations."""

    def __init__(self, entries: dict[tuple[str, ...], list[tuple[str, ...]]] | None = None):
        self.entries: dict[tuple[str, ...], list[tuple[str, ...]]] = {}
        for source, targets in (entries or {}).items():
            for target in targets:
                self.add(source, target)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "TranslationDictionary":
        d = cls()
        for source, target in pairs:
            d.add(tuple(source.split()), tuple(target.split()))
        return d

    def add(self, source: Sequence[str], target: Sequence[str]) -> None:
        source, target = tuple(source), tuple(target)
        if not source or not all(source):
            raise ValidationError("empty dictionary source")
        if not target or not all(target):
            raise ValidationError(f"empty translation for {' '.join(source)!r}")
        targets = self.entries.setdefault(source, [])
        if target not in targets:
            targets.append(target)

    @property
    def max_phrase_len(self) -> int:
        return max(map(len, self.entries), default=0)

    def get(self, source: tuple[str, ...]) -> list[tuple[str, ...]] | None:
        return self.entries.get(source)

    def map_targets(self, fn: Callable[[str], list[str]]) -> "TranslationDictionary":
        """Re-normalize every target side; translations that normalize to nothing are dropped."""
        out = TranslationDictionary()
        for source, targets in self.entries.items():
            for target in targets:
                words = fn(" ".join(target))
                if words:
                    out.add(source, words)
        return out

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class TranslitRules:
    rules: tuple[tuple[str, str], ...]
    table: dict[str, str] = field(init=False, repr=False, compare=False)
    max_len: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        table: dict[str, str] = {}
        for src, tgt in self.rules:
            if not src:
                raise ValidationError("transliteration rule with empty source side")
            table.setdefault(src, tgt)  # first rule wins among equal sources
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "max_len", max(map(len, table), default=0))


def transliterate(token: str, rules: TranslitRules) -> str | None:
    """Longest-match rewrite of the whole token, or None if any part is uncovered."""
    if not token:
        return None
    out = []
    i, n = 0, len(token)
    while i < n:
        for length in range(min(rules.max_len, n - i), 0, -1):
            tgt = rules.table.get(token[i : i + length])
            if tgt is not None:
                out.append(tgt)
                i += length
                break
        else:
            return None
    return "".join(out) or None


class Candidate(NamedTuple):
    words: tuple[str, ...]
    origin: str

    @property
    def text(self) -> str:
        return " ".join(self.words)


@dataclass(frozen=True)
class LatticePosition:
    start: int
    end: int
    source: tuple[str, ...]
    candidates: tuple[Candidate, ...]


@dataclass(frozen=True)
class CandidateLattice:
    positions: tuple[LatticePosition, ...] = ()

    def __len__(self) -> int:
        return len(self.positions)

    def __iter__(self):
        return iter(self.positions)

    def to_json(self, result: "TranslationResult | None" = None) -> str:
        chosen = [set() for _ in self.positions]
        if result is not None:
            chosen = [{c.text for c in picks} for picks in result.chosen]
        doc = {
            "mode": result.mode if result else None,
            "positions": [
                {
                    "span": [p.start, p.end],
                    "source": " ".join(p.source),
                    "candidates": [
                        {"text": c.text, "origin": c.origin, "chosen": c.text in chosen[i]}
                        for c in p.candidates
                    ],
                }
                for i, p in enumerate(self.positions)
            ],
        }
        return json.dumps(doc, ensure_ascii=False, indent=2, sort_keys=True)


@dataclass(frozen=True)
class TranslationResult:
    mode: str
    chosen: tuple[tuple[Candidate, ...], ...]
    terms: tuple[str, ...]
    path_score: float | None = None


def build_lattice(
    source_tokens: Sequence[str],
    dictionary: TranslationDictionary,
    rules: TranslitRules,
    target_vocab: AbstractSet[str] | None = None,
) -> CandidateLattice:
    tokens = list(source_tokens)
    max_len = dictionary.max_phrase_len
    positions = []
    i, n = 0, len(tokens)
    while i < n:
        for length in range(min(max_len, n - i), 0, -1):
            span = tuple(tokens[i : i + length])
            targets = dictionary.get(span)
            if targets:
                cands = tuple(Candidate(t, DICTIONARY) for t in targets)
                positions.append(LatticePosition(i, i + length, span, cands))
                i += length
                break
        else:
            token = tokens[i]
            out = transliterate(token, rules)
            if out is not None and (target_vocab is None or out in target_vocab):
                cand = Candidate((out,), TRANSLITERATION)
            else:
                cand = Candidate((out if out is not None else token,), PASSTHROUGH)
            positions.append(LatticePosition(i, i + 1, (token,), (cand,)))
            i += 1
    return CandidateLattice(tuple(positions))


def _pair_weight(model: BigramModel, left: Candidate, right: Candidate) -> int:
    # exp(pair_score): path products of these integers order paths exactly
    # as sums of ln(count + 1) do, without float ties drifting apart
    return model.count(left.words[-1], right.words[0]) + 1


def disambiguate(lattice: CandidateLattice, model: BigramModel, k: int = 1) -> TranslationResult:
    """Pick k-best candidates per position under the adjacent-pair bigram objective.

    The rank-1 candidates form the path maximising the sum of
    ``pair_score`` over adjacent positions (ties: lexicographically smaller
    candidate strings, position by position). Further candidates are ranked
    by the best path score achievable through them.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    cands = [p.candidates for p in lattice.positions]
    n = len(cands)
    if n == 0:
        return TranslationResult(DIS, (), (), 0.0)

    fwd = [[1] * len(cands[0])]
    for i in range(1, n):
        fwd.append([
            max(fwd[i - 1][a] * _pair_weight(model, pa, c) for a, pa in enumerate(cands[i - 1]))
            for c in cands[i]
        ])
    bwd = [None] * n
    bwd[n - 1] = [1] * len(cands[n - 1])
    for i in range(n - 2, -1, -1):
        bwd[i] = [
            max(_pair_weight(model, c, nc) * bwd[i + 1][b] for b, nc in enumerate(cands[i + 1]))
            for c in cands[i]
        ]

    path: list[int] = []
    for i in range(n):
        if i == 0:
            gains = list(bwd[0])
        else:
            prev = cands[i - 1][path[-1]]
            gains = [_pair_weight(model, prev, c) * bwd[i][j] for j, c in enumerate(cands[i])]
        best = max(gains)
        path.append(min((j for j, g in enumerate(gains) if g == best), key=lambda j: cands[i][j].text))

    chosen = []
    for i in range(n):
        through = [fwd[i][j] * bwd[i][j] for j in range(len(cands[i]))]
        rest = sorted(
            (j for j in range(len(cands[i])) if j != path[i]),
            key=lambda j: (-through[j], cands[i][j].text),
        )
        chosen.append(tuple(cands[i][j] for j in [path[i], *rest][:k]))

    score = 0.0
    for i in range(1, n):
        score += math.log(_pair_weight(model, cands[i - 1][path[i - 1]], cands[i][path[i]]))
    terms = tuple(w for picks in chosen for c in picks for w in c.words)
    return TranslationResult(DIS, tuple(chosen), terms, score)


def translate_all(lattice: CandidateLattice) -> TranslationResult:
    chosen = tuple(p.candidates for p in lattice.positions)
    terms = tuple(w for picks in chosen for c in picks for w in c.words)
    return TranslationResult(ALL, chosen, terms)


def load_dictionary(path: str | Path) -> TranslationDictionary:
    d = TranslationDictionary()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0].split() or not parts[1].split():
                raise ValidationError(f"{path}:{lineno}: expected 'source<TAB>target'")
            d.add(tuple(parts[0].split()), tuple(parts[1].split()))
    return d


def load_translit(path: str | Path) -> TranslitRules:
    rules = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0]:
                raise ValidationError(f"{path}:{lineno}: expected 'source_seq<TAB>target_seq'")
            rules.append((parts[0], parts[1]))
    return TranslitRules(tuple(rules))
