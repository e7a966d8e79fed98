"""Inverted-index BM25 ranking over FAQ banks.

Documents are the question field, the answer field, or their concatenation,
selected by the field mode (qq / qa / qqa).  The idf variant is the
non-negative ln(1 + (N - df + 0.5)/(df + 0.5)), so scores are always >= 0
and zero means "no term overlap".
"""

from __future__ import annotations

import json
import math
from array import array
from bisect import bisect_left
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from faqrank import _kernels
from faqrank.corpus import FaqItem, FormatError
from faqrank.fusion import RankedList, ranked_list_from_scores
from faqrank.text import tokenize

FIELD_MODES = ("qq", "qa", "qqa")

DEFAULT_K1 = 1.2
DEFAULT_B = 0.75

INDEX_FORMAT = "bm25-index"
INDEX_VERSION = 1


@dataclass
class Bm25Index:
    mode: str
    k1: float
    b: float
    doc_ids: tuple[str, ...]
    doc_lengths: tuple[int, ...]
    postings: dict[str, tuple[array, array]]  # term -> (doc positions, tfs)
    avgdl: float = field(init=False)
    _denoms: array = field(init=False, repr=False)
    _id_to_pos: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.doc_ids)
        if n == 0:
            raise ValueError("index must contain at least one document")
        if self.k1 < 0:
            raise ValueError("k1 must be >= 0")
        if not 0 <= self.b <= 1:
            raise ValueError("b must be in [0, 1]")
        self.avgdl = sum(self.doc_lengths) / n
        denoms = array("d", bytes(8 * n))
        for i, length in enumerate(self.doc_lengths):
            ratio = length / self.avgdl if self.avgdl > 0 else 0.0
            denoms[i] = self.k1 * (1 - self.b + self.b * ratio)
        self._denoms = denoms
        self._id_to_pos = {doc_id: i for i, doc_id in enumerate(self.doc_ids)}

    @property
    def doc_count(self) -> int:
        return len(self.doc_ids)

    def idf(self, term: str) -> float:
        df = len(self.postings[term][0]) if term in self.postings else 0
        n = self.doc_count
        return math.log(1 + (n - df + 0.5) / (df + 0.5))


def document_text(item: FaqItem, mode: str) -> str:
    if mode == "qq":
        return item.question
    if mode == "qa":
        return item.answer
    if mode == "qqa":
        return item.question + " " + item.answer
    raise ValueError(f"unknown field mode '{mode}'")


def build_index(bank: Sequence[FaqItem], mode: str,
                k1: float = DEFAULT_K1, b: float = DEFAULT_B) -> Bm25Index:
    """Tokenize the selected field of every item and build the postings."""
    if mode not in FIELD_MODES:
        raise ValueError(f"unknown field mode '{mode}'")
    if not bank:
        raise ValueError("cannot index an empty bank")
    doc_ids = []
    doc_lengths = []
    tf_maps: dict[str, list[tuple[int, int]]] = {}
    for pos, item in enumerate(bank):
        tokens = tokenize(document_text(item, mode))
        doc_ids.append(item.id)
        doc_lengths.append(len(tokens))
        counts: dict[str, int] = {}
        for token in tokens:
            counts[token] = counts.get(token, 0) + 1
        for term, tf in counts.items():
            tf_maps.setdefault(term, []).append((pos, tf))
    postings = {
        term: (array("q", [p for p, _ in plist]), array("q", [tf for _, tf in plist]))
        for term, plist in tf_maps.items()
    }
    return Bm25Index(
        mode=mode,
        k1=k1,
        b=b,
        doc_ids=tuple(doc_ids),
        doc_lengths=tuple(doc_lengths),
        postings=postings,
    )


def score(index: Bm25Index, query_tokens: Sequence[str], doc_id: str) -> float:
    """BM25 score of one document; repeated query terms contribute repeatedly."""
    if doc_id not in index._id_to_pos:
        raise KeyError(f"unknown doc_id '{doc_id}'")
    pos = index._id_to_pos[doc_id]
    k1p1 = index.k1 + 1
    denom = index._denoms[pos]
    total = 0.0
    for term in query_tokens:
        if term not in index.postings:
            continue
        doc_positions, tfs = index.postings[term]
        hit = bisect_left(doc_positions, pos)
        if hit == len(doc_positions) or doc_positions[hit] != pos:
            continue
        tf = tfs[hit]
        total += index.idf(term) * ((tf * k1p1) / (tf + denom))
    return total


def search(index: Bm25Index, query_text: str, k: int,
           query_id: str = "", tag: str = "bm25") -> RankedList:
    """Top-k documents by BM25, zero scorers excluded, ties by ascending id.

    Scoring is term-at-a-time through the kernel backend, which accumulates
    contributions in query-token order -- the same order `score` uses, so
    both paths agree bitwise.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    tokens = tokenize(query_text)
    scores = array("d", bytes(8 * index.doc_count))
    k1p1 = index.k1 + 1
    for term in tokens:
        if term not in index.postings:
            continue
        doc_positions, tfs = index.postings[term]
        _kernels.bm25_accumulate(doc_positions, tfs, index.idf(term), k1p1,
                                 index._denoms, scores)
    scored = [(index.doc_ids[i], scores[i]) for i in _kernels.positive_indices(scores)]
    return ranked_list_from_scores(query_id, scored, tag=tag, k=k)


def save_index(index: Bm25Index, path: str | Path) -> None:
    """Serialize as versioned line-delimited JSON; terms written sorted."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        header = {
            "record": "header",
            "format": INDEX_FORMAT,
            "version": INDEX_VERSION,
            "mode": index.mode,
            "k1": index.k1,
            "b": index.b,
            "doc_count": index.doc_count,
        }
        fh.write(json.dumps(header) + "\n")
        for doc_id, length in zip(index.doc_ids, index.doc_lengths):
            fh.write(json.dumps({"record": "doc", "id": doc_id, "length": length},
                                ensure_ascii=False) + "\n")
        for term in sorted(index.postings):
            doc_positions, tfs = index.postings[term]
            rec = {"record": "term", "term": term,
                   "postings": [[p, tf] for p, tf in zip(doc_positions, tfs)]}
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def load_index(path: str | Path) -> Bm25Index:
    with open(path, encoding="utf-8") as fh:
        header_line = fh.readline()
        try:
            header = json.loads(header_line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}:1: malformed index header") from exc
        if header.get("format") != INDEX_FORMAT:
            raise FormatError(f"{path}: not a {INDEX_FORMAT} file")
        if header.get("version") != INDEX_VERSION:
            raise FormatError(f"{path}: unsupported index version {header.get('version')}")
        doc_ids: list[str] = []
        doc_lengths: list[int] = []
        postings: dict[str, tuple[array, array]] = {}
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}:{lineno}: malformed record") from exc
            kind = rec.get("record")
            if kind == "doc":
                doc_ids.append(rec["id"])
                doc_lengths.append(int(rec["length"]))
            elif kind == "term":
                pairs = rec["postings"]
                postings[rec["term"]] = (
                    array("q", [p for p, _ in pairs]),
                    array("q", [tf for _, tf in pairs]),
                )
            else:
                raise FormatError(f"{path}:{lineno}: unknown record type {kind!r}")
    index = Bm25Index(
        mode=header["mode"],
        k1=float(header["k1"]),
        b=float(header["b"]),
        doc_ids=tuple(doc_ids),
        doc_lengths=tuple(doc_lengths),
        postings=postings,
    )
    if index.doc_count != header["doc_count"]:
        raise FormatError(f"{path}: doc_count mismatch")
    return index
