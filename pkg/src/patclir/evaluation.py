"""Run scoring: non-interpolated average precision and 11-point
interpolated recall-precision curves, macro-averaged over queries.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from patclir.errors import ValidationError

RECALL_LEVELS = tuple(i / 10 for i in range(11))


@dataclass
class Run:
    tag: str
    queries: dict[str, list[tuple[str, float]]] = field(default_factory=dict)

    def ranking(self, query_id: str, depth: int | None = None) -> list[str]:
        hits = self.queries.get(query_id, [])
        if depth is not None:
            hits = hits[:depth]
        return [d for d, _ in hits]


@dataclass
class QueryResult:
    ap: float
    rp_curve: list[float]
    relevant: int
    retrieved: int
    relevant_retrieved: int


@dataclass
class EvalReport:
    tag: str
    per_query: dict[str, QueryResult]
    ratio_to_baseline: float | None = None
    baseline_tag: str | None = None

    @property
    def mean_ap(self) -> float:
        if not self.per_query:
            return 0.0
        return sum(q.ap for q in self.per_query.values()) / len(self.per_query)

    @property
    def mean_rp_curve(self) -> list[float]:
        if not self.per_query:
            return [0.0] * len(RECALL_LEVELS)
        curves = [q.rp_curve for q in self.per_query.values()]
        return [sum(vals) / len(curves) for vals in zip(*curves)]

    def to_dict(self) -> dict:
        return {
            "tag": self.tag,
            "mean_ap": self.mean_ap,
            "mean_rp_curve": self.mean_rp_curve,
            "baseline": self.baseline_tag,
            "ratio_to_baseline": self.ratio_to_baseline,
            "queries": {
                qid: {
                    "ap": q.ap,
                    "rp_curve": q.rp_curve,
                    "relevant": q.relevant,
                    "retrieved": q.retrieved,
                    "relevant_retrieved": q.relevant_retrieved,
                }
                for qid, q in sorted(self.per_query.items())
            },
        }

    @classmethod
    def from_dict(cls, obj: Mapping) -> "EvalReport":
        per_query = {qid: QueryResult(**q) for qid, q in obj["queries"].items()}
        return cls(obj["tag"], per_query, obj.get("ratio_to_baseline"), obj.get("baseline"))


def _check_relevant(relevant) -> int:
    R = len(relevant)
    if R == 0:
        raise ValidationError("no relevant documents for query")
    return R


def average_precision(ranked: Sequence[str], relevant: set[str]) -> float:
    R = _check_relevant(relevant)
    hits = 0
    total = 0.0
    for rank, doc_id in enumerate(ranked, 1):
        if doc_id in relevant:
            hits += 1
            total += hits / rank
    return total / R


def rp_curve(ranked: Sequence[str], relevant: set[str]) -> list[float]:
    """Interpolated precision at recall 0.0, 0.1, ..., 1.0.

    Precision at level L is the best precision at any rank whose recall
    reaches L; 0 when no rank reaches it.
    """
    R = _check_relevant(relevant)
    # best[h] = best precision among ranks with exactly h relevant retrieved
    best = [0.0] * (R + 1)
    hits = 0
    for rank, doc_id in enumerate(ranked, 1):
        if doc_id in relevant:
            hits += 1
        p = hits / rank
        if p > best[hits]:
            best[hits] = p
    # suffix max: best precision with at least h hits
    for h in range(R - 1, -1, -1):
        best[h] = max(best[h], best[h + 1])
    curve = []
    for i in range(len(RECALL_LEVELS)):
        need = -(-i * R // 10)  # smallest h with h / R >= i / 10
        curve.append(best[need])
    return curve


def evaluate_query(ranked: Sequence[str], relevant: set[str]) -> QueryResult:
    found = sum(1 for d in ranked if d in relevant)
    return QueryResult(
        average_precision(ranked, relevant),
        rp_curve(ranked, relevant),
        len(relevant),
        len(ranked),
        found,
    )


def evaluate_run(
    run: Run,
    judgments: Mapping[str, set[str]],
    depth: int | None = None,
    topics: Iterable[str] | None = None,
) -> EvalReport:
    """Score every query of ``run``.

    ``topics`` adds queries absent from the run (they retrieved nothing and
    score 0); every evaluated query needs at least one relevant judgment.
    """
    qids = set(run.queries)
    if topics is not None:
        qids |= set(topics)
    per_query = {}
    for qid in sorted(qids):
        relevant = judgments.get(qid)
        if not relevant:
            raise ValidationError(f"query {qid!r} has no relevant judgments")
        per_query[qid] = evaluate_query(run.ranking(qid, depth), relevant)
    return EvalReport(run.tag, per_query)


def compare(report: EvalReport, baseline: EvalReport) -> float:
    if set(report.per_query) != set(baseline.per_query):
        raise ValidationError(
            f"query sets differ between {report.tag!r} and baseline {baseline.tag!r}"
        )
    base = baseline.mean_ap
    if base <= 0.0:
        raise ValidationError(f"baseline {baseline.tag!r} has zero mean average precision")
    return report.mean_ap / base


def load_run(path: str | Path) -> Run:
    tag = None
    queries: dict[str, list[tuple[str, float]]] = {}
    seen: set[tuple[str, str]] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 5:
                raise ValidationError(f"{path}:{lineno}: expected 5 tab-separated columns")
            qid, doc_id, rank, score, line_tag = parts
            try:
                rank_i, score_f = int(rank), float(score)
            except ValueError:
                raise ValidationError(f"{path}:{lineno}: bad rank or score") from None
            if tag is None:
                tag = line_tag
            elif line_tag != tag:
                raise ValidationError(f"{path}:{lineno}: mixed run tags {tag!r} and {line_tag!r}")
            if (qid, doc_id) in seen:
                raise ValidationError(f"{path}:{lineno}: duplicate document {doc_id!r} for {qid!r}")
            seen.add((qid, doc_id))
            hits = queries.setdefault(qid, [])
            if rank_i != len(hits) + 1:
                raise ValidationError(f"{path}:{lineno}: rank {rank_i} out of sequence")
            if hits and score_f > hits[-1][1]:
                raise ValidationError(f"{path}:{lineno}: scores must be non-increasing")
            hits.append((doc_id, score_f))
    return Run(tag if tag is not None else Path(path).stem, queries)


def format_table(reports: Sequence[EvalReport], baseline_tag: str | None = None) -> str:
    """Plain-text table: method, mean AP, ratio to the baseline method."""
    lines = [f"{'Method':<12}{'Avg. Precision':>16}{'Ratio to ' + (baseline_tag or '-'):>20}"]
    for rep in reports:
        if rep.ratio_to_baseline is None or rep.tag == baseline_tag:
            ratio = "--"
        else:
            ratio = f"{rep.ratio_to_baseline:.4f}"
        lines.append(f"{rep.tag:<12}{rep.mean_ap:>16.4f}{ratio:>20}")
    return "\n".join(lines)


def write_report_json(reports: Sequence[EvalReport], path: str | Path, baseline_tag: str | None) -> None:
    doc = {"baseline": baseline_tag, "methods": [r.to_dict() for r in reports]}
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_curve_tsv(reports: Sequence[EvalReport], path: str | Path) -> None:
    curves = [r.mean_rp_curve for r in reports]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("recall\t" + "\t".join(r.tag for r in reports) + "\n")
        for i, level in enumerate(RECALL_LEVELS):
            fh.write(f"{level:.1f}\t" + "\t".join(f"{c[i]:.6f}" for c in curves) + "\n")
