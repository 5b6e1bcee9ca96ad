"""Documents, topics, and relevance judgments.

Documents and topics are JSON-lines, judgments are a 3-column TSV
(``topic_id  doc_id  relevance``) with strictly binary relevance.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from patclir.errors import ValidationError


@dataclass(frozen=True)
class Document:
    doc_id: str
    lang: str
    text: str


@dataclass(frozen=True)
class Topic:
    topic_id: str
    description: str
    narrative: str = ""
    lang: str = "en"

    def query_text(self, use_narrative: bool = False) -> str:
        if use_narrative and self.narrative:
            return f"{self.description}\n{self.narrative}"
        return self.description


@dataclass(frozen=True)
class Judgment:
    topic_id: str
    doc_id: str
    relevant: bool


@dataclass(frozen=True)
class Collection:
    documents: tuple[Document, ...]
    by_id: dict[str, int] = field(compare=False, repr=False)

    @classmethod
    def from_documents(cls, documents: Iterable[Document]) -> "Collection":
        docs = tuple(documents)
        by_id: dict[str, int] = {}
        for pos, doc in enumerate(docs):
            if doc.doc_id in by_id:
                raise ValidationError(f"duplicate doc_id {doc.doc_id!r}")
            by_id[doc.doc_id] = pos
        return cls(docs, by_id)

    @property
    def N(self) -> int:
        return len(self.documents)

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)

    def __getitem__(self, doc_id: str) -> Document:
        return self.documents[self.by_id[doc_id]]

    def languages(self) -> set[str]:
        return {d.lang for d in self.documents}


def _iter_json_lines(path: str | Path) -> Iterator[tuple[int, dict]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path}:{lineno}: malformed JSON ({exc.msg})") from None
            if not isinstance(obj, dict):
                raise ValidationError(f"{path}:{lineno}: expected a JSON object")
            yield lineno, obj


def _require_str(obj: dict, key: str, where: str) -> str:
    if key not in obj:
        raise ValidationError(f"{where}: missing key {key!r}")
    value = obj[key]
    if not isinstance(value, str):
        raise ValidationError(f"{where}: {key!r} must be a string")
    return value


def load_collection(path: str | Path) -> Collection:
    docs: list[Document] = []
    seen: dict[str, int] = {}
    for lineno, obj in _iter_json_lines(path):
        where = f"{path}:{lineno}"
        doc_id = _require_str(obj, "doc_id", where)
        lang = _require_str(obj, "lang", where)
        text = _require_str(obj, "text", where)
        if not doc_id:
            raise ValidationError(f"{where}: empty doc_id")
        if not text.strip():
            raise ValidationError(f"{where}: empty text for {doc_id!r}")
        if doc_id in seen:
            raise ValidationError(
                f"{where}: duplicate doc_id {doc_id!r} (first seen on line {seen[doc_id]})"
            )
        seen[doc_id] = lineno
        docs.append(Document(doc_id, lang, text))
    if not docs:
        raise ValidationError(f"{path}: empty collection")
    return Collection.from_documents(docs)


def save_collection(collection: Collection, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for doc in collection:
            record = {"doc_id": doc.doc_id, "lang": doc.lang, "text": doc.text}
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def load_topics(path: str | Path) -> list[Topic]:
    topics: list[Topic] = []
    seen: set[str] = set()
    for lineno, obj in _iter_json_lines(path):
        where = f"{path}:{lineno}"
        topic_id = _require_str(obj, "topic_id", where)
        description = _require_str(obj, "description", where)
        narrative = obj.get("narrative", "")
        if narrative is None:
            narrative = ""
        if not isinstance(narrative, str):
            raise ValidationError(f"{where}: 'narrative' must be a string")
        lang = _require_str(obj, "lang", where)
        if not topic_id:
            raise ValidationError(f"{where}: empty topic_id")
        if not description.strip():
            raise ValidationError(f"{where}: empty description for topic {topic_id!r}")
        if topic_id in seen:
            raise ValidationError(f"{where}: duplicate topic_id {topic_id!r}")
        seen.add(topic_id)
        topics.append(Topic(topic_id, description, narrative, lang))
    return topics


def save_topics(topics: Iterable[Topic], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for t in topics:
            record = {
                "topic_id": t.topic_id,
                "description": t.description,
                "narrative": t.narrative,
                "lang": t.lang,
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def load_judgments(path: str | Path) -> list[Judgment]:
    judgments: list[Judgment] = []
    seen: dict[tuple[str, str], int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            where = f"{path}:{lineno}"
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValidationError(f"{where}: expected 3 tab-separated columns, got {len(parts)}")
            topic_id, doc_id, rel = (p.strip() for p in parts)
            if rel not in ("0", "1"):
                raise ValidationError(f"{where}: non-binary relevance {rel!r}")
            key = (topic_id, doc_id)
            if key in seen:
                raise ValidationError(
                    f"{where}: duplicate judgment for ({topic_id}, {doc_id}), first on line {seen[key]}"
                )
            seen[key] = lineno
            judgments.append(Judgment(topic_id, doc_id, rel == "1"))
    return judgments


def relevant_sets(judgments: Iterable[Judgment]) -> dict[str, set[str]]:
    """Map each judged topic to its set of relevant doc_ids (possibly empty)."""
    out: dict[str, set[str]] = {}
    for j in judgments:
        docs = out.setdefault(j.topic_id, set())
        if j.relevant:
            docs.add(j.doc_id)
    return out
