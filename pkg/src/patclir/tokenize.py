"""Content-word tokenizers driven by flat resource files.

Two strategies:

* space-delimited scripts: split on non-alphanumeric runs, lowercase, map
  through a lemma table, drop stopwords;
* unsegmented scripts: greedy longest match over a lexicon whose entries
  are classed ``content`` or ``function``; function words are dropped.

Numbers are kept as tokens in both paths.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, NamedTuple

from patclir.errors import ValidationError

CONTENT = "content"
FUNCTION = "function"
WORD_CLASSES = (CONTENT, FUNCTION)

# Language tags handled by the lexicon segmenter rather than the delimiter splitter.
SEGMENTED_LANGS = frozenset({"ja", "zh", "th"})

_WORD_RE = re.compile(r"[^\W_]+")

Tokenizer = Callable[[str], list[str]]


@dataclass(frozen=True)
class StopwordList:
    words: frozenset[str]

    def __post_init__(self):
        for w in self.words:
            if not w or w != w.lower() or any(c.isspace() for c in w):
                raise ValidationError(f"invalid stopword {w!r}")

    def __contains__(self, word: str) -> bool:
        return word in self.words


@dataclass(frozen=True)
class LemmaTable:
    roots: dict[str, str]

    def __post_init__(self):
        for form, root in self.roots.items():
            if not form or not root:
                raise ValidationError(f"empty lemma entry {form!r} -> {root!r}")

    def lemma(self, word: str) -> str:
        return self.roots.get(word, word)


@dataclass(frozen=True)
class SegmentLexicon:
    entries: dict[str, str]

    def __post_init__(self):
        for surface, cls in self.entries.items():
            if not surface:
                raise ValidationError("empty lexicon surface")
            if cls not in WORD_CLASSES:
                raise ValidationError(f"unknown class {cls!r} for {surface!r}")
        object.__setattr__(self, "max_len", max(map(len, self.entries), default=0))

    def __len__(self) -> int:
        return len(self.entries)


class Segment(NamedTuple):
    surface: str
    kind: str  # "content", "function", "fallback" or "space"


EMPTY_STOPWORDS = StopwordList(frozenset())
EMPTY_LEMMAS = LemmaTable({})


def tokenize_delimited(
    text: str,
    stopwords: StopwordList = EMPTY_STOPWORDS,
    lemmas: LemmaTable = EMPTY_LEMMAS,
) -> list[str]:
    out = []
    for raw in _WORD_RE.findall(text):
        word = lemmas.lemma(raw.lower())
        if word not in stopwords:
            out.append(word)
    return out


def segment(text: str, lexicon: SegmentLexicon) -> list[Segment]:
    """Greedy longest-match segmentation keeping every piece of the input.

    Concatenating the surfaces of the returned segments gives back ``text``.
    Unmatched characters become single-character ``fallback`` segments,
    except whitespace, which becomes a ``space`` segment.
    """
    entries = lexicon.entries
    max_len = lexicon.max_len
    n = len(text)
    out: list[Segment] = []
    i = 0
    while i < n:
        for length in range(min(max_len, n - i), 0, -1):
            piece = text[i : i + length]
            cls = entries.get(piece)
            if cls is not None:
                out.append(Segment(piece, cls))
                i += length
                break
        else:
            ch = text[i]
            out.append(Segment(ch, "space" if ch.isspace() else "fallback"))
            i += 1
    return out


def tokenize_segmented(text: str, lexicon: SegmentLexicon) -> list[str]:
    return [s.surface for s in segment(text, lexicon) if s.kind in (CONTENT, "fallback")]


def _read_lines(path: str | Path) -> Iterable[tuple[int, str]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if line.strip() and not line.startswith("#"):
                yield lineno, line


def _two_columns(path, lineno, line) -> tuple[str, str]:
    parts = line.split("\t")
    if len(parts) != 2 or not parts[0] or not parts[1]:
        raise ValidationError(f"{path}:{lineno}: expected 2 non-empty tab-separated columns")
    return parts[0], parts[1]


def load_stopwords(path: str | Path) -> StopwordList:
    words = set()
    for lineno, line in _read_lines(path):
        word = line.strip()
        if any(c.isspace() for c in word):
            raise ValidationError(f"{path}:{lineno}: stopword contains whitespace: {word!r}")
        words.add(word.lower())
    return StopwordList(frozenset(words))


def load_lemmas(path: str | Path) -> LemmaTable:
    roots = {}
    for lineno, line in _read_lines(path):
        form, root = _two_columns(path, lineno, line)
        roots[form.strip().lower()] = root.strip().lower()
    return LemmaTable(roots)


def load_lexicon(path: str | Path) -> SegmentLexicon:
    entries: dict[str, str] = {}
    for lineno, line in _read_lines(path):
        surface, cls = _two_columns(path, lineno, line)
        cls = cls.strip()
        if cls not in WORD_CLASSES:
            raise ValidationError(f"{path}:{lineno}: unknown class {cls!r}")
        prev = entries.get(surface)
        if prev is not None and prev != cls:
            raise ValidationError(f"{path}:{lineno}: {surface!r} already classed {prev!r}")
        entries[surface] = cls
    if not entries:
        raise ValidationError(f"{path}: empty lexicon")
    return SegmentLexicon(entries)


def make_tokenizer(
    lang: str,
    *,
    stopwords: StopwordList | None = None,
    lemmas: LemmaTable | None = None,
    lexicon: SegmentLexicon | None = None,
) -> Tokenizer:
    """Pick the tokenization strategy for a language tag."""
    if lang in SEGMENTED_LANGS:
        if lexicon is None:
            raise ValidationError(f"language {lang!r} needs a segmentation lexicon (--lexicon)")
        return lambda text: tokenize_segmented(text, lexicon)
    sw = stopwords if stopwords is not None else EMPTY_STOPWORDS
    lm = lemmas if lemmas is not None else EMPTY_LEMMAS
    return lambda text: tokenize_delimited(text, sw, lm)
