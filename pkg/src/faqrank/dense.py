"""Dense ranking over per-item embedding vectors.

Vectors either come from an embedding file (the interchange point for any
external sentence encoder) or from the built-in hashed bag-of-words encoder,
which is deterministic and portable: FNV-1a 64 on the token's UTF-8 bytes
picks the coordinate (h mod dim) and the sign (bit 63), then the vector is
L2-normalized.
"""

from __future__ import annotations

import json
import math
from array import array
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from faqrank import _kernels
from faqrank.corpus import FormatError
from faqrank.fusion import RankedList, ranked_list_from_scores

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


@dataclass
class EmbeddingStore:
    dim: int
    ids: tuple[str, ...]
    _flat: array = field(repr=False)
    _norms: array = field(init=False, repr=False)
    _id_to_pos: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if len(self._flat) != self.dim * len(self.ids):
            raise ValueError("flat buffer size does not match dim * #ids")
        self._id_to_pos = {}
        for pos, vec_id in enumerate(self.ids):
            if vec_id in self._id_to_pos:
                raise ValueError(f"duplicate id '{vec_id}'")
            self._id_to_pos[vec_id] = pos
        norms = array("d", bytes(8 * len(self.ids)))
        for pos in range(len(self.ids)):
            base = pos * self.dim
            norms[pos] = math.sqrt(_kernels.dot(self._flat, base, self._flat, base, self.dim))
        self._norms = norms

    def __len__(self) -> int:
        return len(self.ids)

    def vector(self, vec_id: str) -> list[float]:
        pos = self._id_to_pos[vec_id]
        base = pos * self.dim
        return list(self._flat[base : base + self.dim])

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, Sequence[float]]]) -> "EmbeddingStore":
        ids: list[str] = []
        flat = array("d")
        dim = None
        for vec_id, vec in pairs:
            if dim is None:
                dim = len(vec)
                if dim < 1:
                    raise ValueError(f"vector for '{vec_id}' is empty")
            elif len(vec) != dim:
                raise ValueError(
                    f"dimension mismatch for '{vec_id}': expected {dim}, got {len(vec)}"
                )
            for value in vec:
                if not math.isfinite(value):
                    raise ValueError(f"non-finite value in vector for '{vec_id}'")
            ids.append(vec_id)
            flat.extend(vec)
        if dim is None:
            raise ValueError("no vectors provided")
        return cls(dim=dim, ids=tuple(ids), _flat=flat)


def load_embeddings(path: str | Path) -> EmbeddingStore:
    """Load {id, vec} records; dimension is fixed by the first record."""
    pairs: list[tuple[str, list[float]]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}:{lineno}: malformed record ({exc.msg})") from exc
            if not isinstance(rec, dict) or "id" not in rec or "vec" not in rec:
                raise FormatError(f"{path}:{lineno}: record needs 'id' and 'vec'")
            vec = rec["vec"]
            if not isinstance(vec, list) or not vec:
                raise FormatError(f"{path}:{lineno}: 'vec' must be a non-empty list")
            values = []
            for v in vec:
                if not isinstance(v, (int, float)) or isinstance(v, bool):
                    raise FormatError(f"{path}:{lineno}: non-numeric vector entry {v!r}")
                values.append(float(v))
            pairs.append((str(rec["id"]), values))
    try:
        return EmbeddingStore.from_pairs(pairs)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def save_embeddings(store: EmbeddingStore, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for vec_id in store.ids:
            fh.write(json.dumps({"id": vec_id, "vec": store.vector(vec_id)}) + "\n")


def hash_encode(tokens: Sequence[str], dim: int) -> list[float]:
    """Signed hashed bag-of-words vector, L2-normalized."""
    if dim < 2:
        raise ValueError("dim must be >= 2")
    if not tokens:
        raise ValueError("cannot encode an empty token sequence")
    vec = [0.0] * dim
    for token in tokens:
        h = _FNV_OFFSET
        for byte in token.encode("utf-8"):
            h ^= byte
            h = (h * _FNV_PRIME) & _MASK64
        sign = 1.0 if (h >> 63) == 0 else -1.0
        vec[h % dim] += sign
    norm = math.sqrt(sum(v * v for v in vec))
    if norm == 0:
        raise ValueError("tokens cancelled to a zero vector; cannot normalize")
    return [v / norm for v in vec]


def cosine(u: Sequence[float], v: Sequence[float]) -> float:
    """dot(u, v) / (|u| |v|), clamped into [-1, 1]."""
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    ua = array("d", u)
    va = array("d", v)
    n = len(ua)
    norm_u = math.sqrt(_kernels.dot(ua, 0, ua, 0, n))
    norm_v = math.sqrt(_kernels.dot(va, 0, va, 0, n))
    if norm_u == 0 or norm_v == 0:
        raise ValueError("cosine is undefined for zero-norm input")
    value = _kernels.dot(ua, 0, va, 0, n) / (norm_u * norm_v)
    return max(-1.0, min(1.0, value))


def search(store: EmbeddingStore, query_vector: Sequence[float], k: int,
           query_id: str = "", tag: str = "dense") -> RankedList:
    """Top-k ids by cosine against the store; ties by ascending id.

    Stored vectors must have positive norm (a zero vector has no direction
    to compare against).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(query_vector) != store.dim:
        raise ValueError(f"dimension mismatch: query {len(query_vector)} vs store {store.dim}")
    q = array("d", query_vector)
    q_norm = math.sqrt(_kernels.dot(q, 0, q, 0, store.dim))
    if q_norm == 0:
        raise ValueError("cosine is undefined for zero-norm input")
    dots = array("d", bytes(8 * len(store)))
    _kernels.matvec(store._flat, q, len(store), store.dim, dots)
    scored = []
    for pos, vec_id in enumerate(store.ids):
        if store._norms[pos] == 0:
            raise ValueError(f"stored vector '{vec_id}' has zero norm")
        value = dots[pos] / (store._norms[pos] * q_norm)
        scored.append((vec_id, max(-1.0, min(1.0, value))))
    return ranked_list_from_scores(query_id, scored, tag=tag, k=k)
