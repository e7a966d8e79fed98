"""Score normalization, CombSum fusion, and candidate-pool construction.

A RankedList is the interchange unit between rankers, fusion, pooling, and
metrics: per-query entries with contiguous 1-based ranks and non-increasing
scores.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Collection, Iterable, Sequence

COMBSUM_TAG = "combsum"


@dataclass(frozen=True)
class RunEntry:
    faq_id: str
    rank: int
    score: float


@dataclass(frozen=True)
class RankedList:
    query_id: str
    entries: tuple[RunEntry, ...]
    tag: str

    def __post_init__(self):
        seen: set[str] = set()
        prev_score = None
        for position, entry in enumerate(self.entries, start=1):
            if entry.rank != position:
                raise ValueError(
                    f"ranks must be contiguous from 1; got rank {entry.rank} "
                    f"at position {position} (query '{self.query_id}')"
                )
            if prev_score is not None and entry.score > prev_score:
                raise ValueError(f"scores must be non-increasing (query '{self.query_id}')")
            prev_score = entry.score
            if entry.faq_id in seen:
                raise ValueError(
                    f"duplicate faq_id '{entry.faq_id}' in list for query '{self.query_id}'"
                )
            seen.add(entry.faq_id)


def ranked_list_from_scores(query_id: str, scored: Iterable[tuple[str, float]],
                            tag: str, k: int | None = None) -> RankedList:
    """Build a RankedList from (id, score) pairs: score desc, id asc on ties."""
    ordered = sorted(scored, key=lambda pair: (-pair[1], pair[0]))
    if k is not None:
        ordered = ordered[:k]
    entries = tuple(
        RunEntry(faq_id=faq_id, rank=rank, score=score)
        for rank, (faq_id, score) in enumerate(ordered, start=1)
    )
    return RankedList(query_id=query_id, entries=entries, tag=tag)


def minmax_normalize(ranked: RankedList) -> RankedList:
    """Map scores to (s - min)/(max - min) over this list; all 0.5 when max = min."""
    if not ranked.entries:
        raise ValueError("cannot normalize an empty ranked list")
    scores = [e.score for e in ranked.entries]
    low = min(scores)
    high = max(scores)
    if high == low:
        normalized = [0.5] * len(scores)
    else:
        span = high - low
        normalized = [(s - low) / span for s in scores]
    entries = tuple(
        RunEntry(e.faq_id, e.rank, n) for e, n in zip(ranked.entries, normalized)
    )
    return RankedList(query_id=ranked.query_id, entries=entries, tag=ranked.tag)


def combsum(lists: Sequence[RankedList], k: int | None = None,
            total_sources: int | None = None) -> RankedList:
    """Fuse rankers by averaging min-max normalized scores; absence counts 0.

    total_sources overrides the averaging denominator when some rankers
    returned nothing for this query (the CLI fuses run files that way); by
    default it is len(lists) and at least 2 lists are required.
    """
    if total_sources is None:
        total_sources = len(lists)
    if total_sources < 2:
        raise ValueError("combsum needs at least 2 input lists")
    if not 1 <= len(lists) <= total_sources:
        raise ValueError("between 1 and total_sources lists required")
    query_id = lists[0].query_id
    for ranked in lists[1:]:
        if ranked.query_id != query_id:
            raise ValueError(
                f"mismatched query_ids: '{query_id}' vs '{ranked.query_id}'"
            )
    sums: dict[str, float] = {}
    for ranked in lists:
        for entry in minmax_normalize(ranked).entries:
            sums[entry.faq_id] = sums.get(entry.faq_id, 0.0) + entry.score
    fused = [(faq_id, total / total_sources) for faq_id, total in sums.items()]
    return ranked_list_from_scores(query_id, fused, tag=COMBSUM_TAG, k=k)


def build_candidate_pool(lists: Sequence[RankedList],
                         per_list_k: int = 10) -> tuple[str, ...]:
    """Union of each list's top-`per_list_k` ids, sorted ascending."""
    if per_list_k < 1:
        raise ValueError("per_list_k must be >= 1")
    pool: set[str] = set()
    for ranked in lists:
        pool.update(e.faq_id for e in ranked.entries[:per_list_k])
    return tuple(sorted(pool))


@dataclass(frozen=True)
class PoolStats:
    mean_size: float
    min_size: int
    max_size: int


def pool_stats(pools: Sequence[Collection[str]]) -> PoolStats:
    """Arithmetic statistics over per-query pool sizes."""
    if not pools:
        raise ValueError("pool_stats needs at least one pool")
    sizes = [len(p) for p in pools]
    return PoolStats(
        mean_size=sum(sizes) / len(sizes),
        min_size=min(sizes),
        max_size=max(sizes),
    )
