"""Data model and line-delimited JSON persistence for banks and annotations.

All record files are UTF-8 with one JSON object per line.  Loaders validate
every invariant up front and report the offending line number; collections
come back as immutable tuples in file order, safe to share across threads.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from faqrank.sampling import Xoshiro256StarStar, largest_remainder

FAQ_FORMS = ("question", "query_string", "forum")
QUERY_FORMS = ("question", "query_string")
NLI_ENVIRONMENTS = ("negation", "modal", "question", "conditional")
NLI_PERSONS = ("first", "second", "third")
SPLITS = ("train", "dev", "test")

MIN_ANNOTATION_SCORES = 3
MIN_NLI_ANNOTATIONS = 8


class FormatError(ValueError):
    """A record file violates its schema; message carries path and line."""


class DataWarning(UserWarning):
    """Non-fatal data quality issue (e.g. fewer annotations than targeted)."""


@dataclass(frozen=True)
class FaqItem:
    id: str
    question: str
    answer: str
    source: str
    language: str
    form: str


@dataclass(frozen=True)
class Query:
    id: str
    text: str
    form: str
    template_id: str | None = None


@dataclass(frozen=True)
class AnnotationTuple:
    query_id: str
    faq_id: str
    raw_scores: tuple[int, ...]


@dataclass(frozen=True)
class NliItem:
    id: str
    premise: str
    hypothesis: str
    annotations: tuple[int, ...]
    environment: str
    person: str
    matrix_verb: str
    factive: bool


@dataclass(frozen=True)
class SplitAssignment:
    item_id: str
    split: str


def _iter_records(path: str | Path, fields: tuple[str, ...],
                  optional: tuple[str, ...] = ()) -> Iterator[tuple[int, dict]]:
    """Yield (line_number, record) dicts, enforcing the schema field set."""
    known = set(fields) | set(optional)
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}:{lineno}: malformed record ({exc.msg})") from exc
            if not isinstance(record, dict):
                raise FormatError(f"{path}:{lineno}: record is not an object")
            missing = [f for f in fields if f not in record]
            if missing:
                raise FormatError(
                    f"{path}:{lineno}: missing required field(s) {', '.join(missing)}"
                )
            extra = sorted(set(record) - known)
            if extra:
                warnings.warn(
                    f"{path}:{lineno}: ignoring unknown field(s) {', '.join(extra)}",
                    DataWarning,
                    stacklevel=3,
                )
                record = {k: v for k, v in record.items() if k in known}
            yield lineno, record


def _require_text(path, lineno: int, record: dict, field: str) -> str:
    value = record[field]
    if not isinstance(value, str) or not value.strip():
        raise FormatError(f"{path}:{lineno}: field '{field}' must be non-empty text")
    return value


def _check_unique(path, lineno: int, seen: set[str], item_id: str) -> None:
    if item_id in seen:
        raise FormatError(f"{path}:{lineno}: duplicate id '{item_id}'")
    seen.add(item_id)


def load_faq_bank(path: str | Path) -> tuple[FaqItem, ...]:
    """Load an FAQ bank, preserving file order."""
    items = []
    seen: set[str] = set()
    fields = ("id", "question", "answer", "source", "language", "form")
    for lineno, rec in _iter_records(path, fields):
        item_id = _require_text(path, lineno, rec, "id")
        _check_unique(path, lineno, seen, item_id)
        form = rec["form"]
        if form not in FAQ_FORMS:
            raise FormatError(f"{path}:{lineno}: unknown form '{form}'")
        items.append(
            FaqItem(
                id=item_id,
                question=_require_text(path, lineno, rec, "question"),
                answer=_require_text(path, lineno, rec, "answer"),
                source=str(rec["source"]),
                language=str(rec["language"]),
                form=form,
            )
        )
    return tuple(items)


def load_queries(path: str | Path) -> tuple[Query, ...]:
    queries = []
    seen: set[str] = set()
    for lineno, rec in _iter_records(path, ("id", "text", "form"), optional=("template_id",)):
        query_id = _require_text(path, lineno, rec, "id")
        _check_unique(path, lineno, seen, query_id)
        form = rec["form"]
        if form not in QUERY_FORMS:
            raise FormatError(f"{path}:{lineno}: unknown form '{form}'")
        template_id = rec.get("template_id")
        if template_id is not None:
            template_id = str(template_id)
        queries.append(
            Query(
                id=query_id,
                text=_require_text(path, lineno, rec, "text"),
                form=form,
                template_id=template_id,
            )
        )
    return tuple(queries)


def load_annotations(path: str | Path) -> tuple[AnnotationTuple, ...]:
    """Load raw annotation tuples; all raw scores are kept as-is."""
    tuples = []
    for lineno, rec in _iter_records(path, ("query_id", "faq_id", "raw_scores")):
        scores = rec["raw_scores"]
        if not isinstance(scores, list) or not scores:
            raise FormatError(f"{path}:{lineno}: raw_scores must be a non-empty list")
        for s in scores:
            if not isinstance(s, int) or isinstance(s, bool) or not 1 <= s <= 4:
                raise FormatError(f"{path}:{lineno}: score {s!r} outside 1..4")
        if len(scores) < MIN_ANNOTATION_SCORES:
            warnings.warn(
                f"{path}:{lineno}: only {len(scores)} annotation score(s); "
                f"target is at least {MIN_ANNOTATION_SCORES}",
                DataWarning,
                stacklevel=2,
            )
        tuples.append(
            AnnotationTuple(
                query_id=_require_text(path, lineno, rec, "query_id"),
                faq_id=_require_text(path, lineno, rec, "faq_id"),
                raw_scores=tuple(scores),
            )
        )
    return tuple(tuples)


def load_nli_items(path: str | Path) -> tuple[NliItem, ...]:
    items = []
    seen: set[str] = set()
    fields = ("id", "premise", "hypothesis", "annotations",
              "environment", "person", "matrix_verb", "factive")
    for lineno, rec in _iter_records(path, fields):
        item_id = _require_text(path, lineno, rec, "id")
        _check_unique(path, lineno, seen, item_id)
        annotations = rec["annotations"]
        if not isinstance(annotations, list) or not annotations:
            raise FormatError(f"{path}:{lineno}: annotations must be a non-empty list")
        for a in annotations:
            if not isinstance(a, int) or isinstance(a, bool) or not -3 <= a <= 3:
                raise FormatError(f"{path}:{lineno}: annotation {a!r} outside -3..3")
        if len(annotations) < MIN_NLI_ANNOTATIONS:
            warnings.warn(
                f"{path}:{lineno}: only {len(annotations)} annotation(s); "
                f"target is at least {MIN_NLI_ANNOTATIONS}",
                DataWarning,
                stacklevel=2,
            )
        if rec["environment"] not in NLI_ENVIRONMENTS:
            raise FormatError(f"{path}:{lineno}: unknown environment '{rec['environment']}'")
        if rec["person"] not in NLI_PERSONS:
            raise FormatError(f"{path}:{lineno}: unknown person '{rec['person']}'")
        if not isinstance(rec["factive"], bool):
            raise FormatError(f"{path}:{lineno}: factive must be a boolean")
        items.append(
            NliItem(
                id=item_id,
                premise=_require_text(path, lineno, rec, "premise"),
                hypothesis=_require_text(path, lineno, rec, "hypothesis"),
                annotations=tuple(annotations),
                environment=rec["environment"],
                person=rec["person"],
                matrix_verb=str(rec["matrix_verb"]),
                factive=rec["factive"],
            )
        )
    return tuple(items)


def _write_records(path: str | Path, records: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=False) + "\n")


def save_faq_bank(items: Iterable[FaqItem], path: str | Path) -> None:
    _write_records(path, (vars(i) for i in items))


def save_queries(queries: Iterable[Query], path: str | Path) -> None:
    def rec(q: Query) -> dict:
        d = {"id": q.id, "text": q.text, "form": q.form}
        if q.template_id is not None:
            d["template_id"] = q.template_id
        return d

    _write_records(path, (rec(q) for q in queries))


def save_annotations(tuples: Iterable[AnnotationTuple], path: str | Path) -> None:
    _write_records(
        path,
        ({"query_id": t.query_id, "faq_id": t.faq_id, "raw_scores": list(t.raw_scores)}
         for t in tuples),
    )


def save_nli_items(items: Iterable[NliItem], path: str | Path) -> None:
    _write_records(
        path,
        ({"id": i.id, "premise": i.premise, "hypothesis": i.hypothesis,
          "annotations": list(i.annotations), "environment": i.environment,
          "person": i.person, "matrix_verb": i.matrix_verb, "factive": i.factive}
         for i in items),
    )


def split_dataset(item_ids: list[str], ratios: tuple[float, float, float],
                  seed: int) -> list[SplitAssignment]:
    """Assign ids to train/dev/test with largest-remainder sizes.

    The shuffle is a seeded Fisher-Yates over xoshiro256**, so a fixed seed
    gives the same assignment on every platform.  Assignments are returned
    in the original id order.
    """
    if len(set(item_ids)) != len(item_ids):
        raise ValueError("item ids must be unique")
    if len(ratios) != len(SPLITS):
        raise ValueError(f"expected {len(SPLITS)} ratios, got {len(ratios)}")
    sizes = largest_remainder(len(item_ids), ratios)
    shuffled = list(item_ids)
    Xoshiro256StarStar(seed).shuffle(shuffled)
    assignment: dict[str, str] = {}
    start = 0
    for split, size in zip(SPLITS, sizes):
        for item_id in shuffled[start : start + size]:
            assignment[item_id] = split
        start += size
    return [SplitAssignment(item_id, assignment[item_id]) for item_id in item_ids]
