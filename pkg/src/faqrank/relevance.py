"""Aggregate raw annotation scores into judgments and qrels.

The positive threshold (mean strictly greater than 3) is evaluated as the
integer comparison sum > 3 * count, so boundary means are exact and never
subject to floating-point drift.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from faqrank.corpus import AnnotationTuple, Query

POSITIVE_MEAN_THRESHOLD = 3


@dataclass(frozen=True)
class RelevanceJudgment:
    query_id: str
    faq_id: str
    raw_scores: tuple[int, ...]
    mean: float
    positive: bool


def aggregate(tuples: Sequence[AnnotationTuple]) -> tuple[RelevanceJudgment, ...]:
    """One judgment per (query, item) pair; duplicates are an error."""
    seen: set[tuple[str, str]] = set()
    judgments = []
    for t in tuples:
        key = (t.query_id, t.faq_id)
        if key in seen:
            raise ValueError(f"duplicate annotation tuple for {key}")
        seen.add(key)
        total = sum(t.raw_scores)
        count = len(t.raw_scores)
        judgments.append(
            RelevanceJudgment(
                query_id=t.query_id,
                faq_id=t.faq_id,
                raw_scores=t.raw_scores,
                mean=total / count,
                positive=total > POSITIVE_MEAN_THRESHOLD * count,
            )
        )
    return tuple(judgments)


@dataclass(frozen=True)
class FilterResult:
    answerable: tuple[Query, ...]
    removed_count: int


def filter_unanswerable(queries: Sequence[Query],
                        judgments: Iterable[RelevanceJudgment]) -> FilterResult:
    """Drop queries that have no positive judgment; keep the original order."""
    has_positive = {j.query_id for j in judgments if j.positive}
    answerable = tuple(q for q in queries if q.id in has_positive)
    return FilterResult(answerable=answerable,
                        removed_count=len(queries) - len(answerable))


def emit_qrels(judgments: Iterable[RelevanceJudgment], path: str | Path) -> None:
    """Write binary qrels lines "query_id 0 faq_id rel", sorted for determinism."""
    rows = sorted((j.query_id, j.faq_id, 1 if j.positive else 0) for j in judgments)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for query_id, faq_id, rel in rows:
            fh.write(f"{query_id} 0 {faq_id} {rel}\n")
