"""Retrieval metrics (P@k, MRR, AP with cutoff) and classification metrics.

Qrels are binary dicts keyed by (query_id, faq_id); unjudged pairs count as
non-relevant.  The AP denominator is the total number of relevant items for
the query, including ones never retrieved, matching the usual map_cut
convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from faqrank.fusion import RankedList

Qrels = Mapping[tuple[str, str], int]


def precision_at_k(run: RankedList, qrels: Qrels, k: int) -> float:
    """Relevant among the top min(k, len) entries, divided by k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    hits = sum(
        1 for e in run.entries[:k] if qrels.get((run.query_id, e.faq_id), 0) == 1
    )
    return hits / k


def reciprocal_rank(run: RankedList, qrels: Qrels) -> float:
    for position, entry in enumerate(run.entries, start=1):
        if qrels.get((run.query_id, entry.faq_id), 0) == 1:
            return 1 / position
    return 0.0


def average_precision(run: RankedList, qrels: Qrels, cutoff: int = 100) -> float:
    """Sum of precision@rank over relevant hits within the cutoff, over R."""
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    total_relevant = sum(
        1 for (query_id, _), rel in qrels.items()
        if query_id == run.query_id and rel == 1
    )
    if total_relevant == 0:
        return 0.0
    hits = 0
    ap_sum = 0.0
    for position, entry in enumerate(run.entries[:cutoff], start=1):
        if qrels.get((run.query_id, entry.faq_id), 0) == 1:
            hits += 1
            ap_sum += hits / position
    return ap_sum / total_relevant


def mean_over_queries(per_query_values: Sequence[float]) -> float:
    if not per_query_values:
        raise ValueError("need at least one query")
    return sum(per_query_values) / len(per_query_values)


@dataclass(frozen=True)
class ConfusionMatrix:
    labels: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]  # rows = gold, columns = predicted

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)


@dataclass(frozen=True)
class ClassificationReport:
    accuracy: float
    per_label_f1: dict[str, float]
    macro_f1: float
    confusion: ConfusionMatrix


def classification_report(gold: Sequence[str], predicted: Sequence[str],
                          labels: Sequence[str]) -> ClassificationReport:
    """Accuracy, per-label F1 (0 when P+R = 0), macro F1, confusion matrix."""
    if len(gold) != len(predicted):
        raise ValueError(f"length mismatch: {len(gold)} gold vs {len(predicted)} predicted")
    if not gold:
        raise ValueError("need at least one item")
    index = {label: i for i, label in enumerate(labels)}
    counts = [[0] * len(labels) for _ in labels]
    for g, p in zip(gold, predicted):
        if g not in index:
            raise ValueError(f"unknown gold label '{g}'")
        if p not in index:
            raise ValueError(f"unknown predicted label '{p}'")
        counts[index[g]][index[p]] += 1
    correct = sum(counts[i][i] for i in range(len(labels)))
    per_label_f1: dict[str, float] = {}
    for i, label in enumerate(labels):
        tp = counts[i][i]
        gold_total = sum(counts[i])
        pred_total = sum(row[i] for row in counts)
        precision = tp / pred_total if pred_total else 0.0
        recall = tp / gold_total if gold_total else 0.0
        per_label_f1[label] = (
            2 * precision * recall / (precision + recall) if precision + recall else 0.0
        )
    return ClassificationReport(
        accuracy=correct / len(gold),
        per_label_f1=per_label_f1,
        macro_f1=sum(per_label_f1.values()) / len(labels),
        confusion=ConfusionMatrix(
            labels=tuple(labels),
            counts=tuple(tuple(row) for row in counts),
        ),
    )
