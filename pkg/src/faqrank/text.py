"""Tokenization and n-gram extraction shared by every term-level component.

This is the single normalization point of the toolkit: BM25, the hashed
encoder, the diversity metrics, and the phrase tools all tokenize here, so
they agree on term identity by construction.
"""

from __future__ import annotations

import unicodedata
from functools import lru_cache
from typing import Callable, Collection, Sequence


@lru_cache(maxsize=None)
def _is_word_char(ch: str) -> bool:
    # Unicode letters (L*) and decimal digits (Nd); everything else separates.
    cat = unicodedata.category(ch)
    return cat.startswith("L") or cat == "Nd"


def tokenize(text: str, stopwords: Collection[str] | None = None,
             stemmer: Callable[[str], str] | None = None) -> list[str]:
    """Lowercase and split on maximal runs of non-alphanumeric characters.

    Stopword removal and stemming are off by default; a stemmer is any
    token -> token callable supplied by the caller.
    """
    tokens = []
    current: list[str] = []
    for ch in text.lower():
        if _is_word_char(ch):
            current.append(ch)
        elif current:
            tokens.append("".join(current))
            current = []
    if current:
        tokens.append("".join(current))
    if stopwords:
        tokens = [t for t in tokens if t not in stopwords]
    if stemmer is not None:
        tokens = [stemmer(t) for t in tokens]
    return tokens


def ngrams(tokens: Sequence[str], n: int) -> list[tuple[str, ...]]:
    """All contiguous n-token windows, in order; empty when len(tokens) < n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return [tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]
