"""TREC-format run and qrels files, the CLI's interchange formats.

Run lines are "query_id Q0 faq_id rank score tag"; scores are written with
repr() so values survive a file round-trip unchanged.  Qrels lines are
"query_id 0 faq_id rel" with rel in {0, 1}.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping

from faqrank.corpus import FormatError
from faqrank.fusion import RankedList, RunEntry


def load_run(path: str | Path) -> dict[str, RankedList]:
    """Parse a run file into per-query RankedLists, keyed by query_id."""
    grouped: dict[str, list[tuple[int, str, float, str]]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 6:
                raise FormatError(f"{path}:{lineno}: expected 6 columns, got {len(parts)}")
            query_id, _, faq_id, rank, score, tag = parts
            try:
                grouped.setdefault(query_id, []).append(
                    (int(rank), faq_id, float(score), tag)
                )
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: bad rank or score") from exc
    runs: dict[str, RankedList] = {}
    for query_id, rows in grouped.items():
        rows.sort(key=lambda r: r[0])
        entries = tuple(RunEntry(faq_id=f, rank=r, score=s) for r, f, s, _ in rows)
        try:
            runs[query_id] = RankedList(query_id=query_id, entries=entries, tag=rows[0][3])
        except ValueError as exc:
            raise FormatError(f"{path}: invalid run for query '{query_id}': {exc}") from exc
    return runs


def save_run(runs: Mapping[str, RankedList], path: str | Path) -> None:
    """Write runs sorted by (query_id, rank) for byte-stable output."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for query_id in sorted(runs):
            ranked = runs[query_id]
            for entry in ranked.entries:
                fh.write(
                    f"{query_id} Q0 {entry.faq_id} {entry.rank} "
                    f"{entry.score!r} {ranked.tag}\n"
                )


def load_qrels(path: str | Path) -> dict[tuple[str, str], int]:
    qrels: dict[tuple[str, str], int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 4:
                raise FormatError(f"{path}:{lineno}: expected 4 columns, got {len(parts)}")
            query_id, _, faq_id, rel = parts
            if rel not in ("0", "1"):
                raise FormatError(f"{path}:{lineno}: relevance must be 0 or 1, got {rel!r}")
            key = (query_id, faq_id)
            if key in qrels:
                raise FormatError(f"{path}:{lineno}: duplicate qrels entry for {key}")
            qrels[key] = int(rel)
    return qrels
