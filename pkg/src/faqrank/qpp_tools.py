"""Question-phrase inventories, span post-processing, and dev-set sampling.

Phrase sets collect the leading n-grams of a question corpus.  Unigrams are
always kept; an n-gram (n >= 2) survives only if its relative frequency
exceeds the threshold zeta, otherwise the question degrades to its leading
unigram so no question ever loses its phrase.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from faqrank.corpus import FormatError
from faqrank.sampling import Xoshiro256StarStar, largest_remainder

DEFAULT_ZETA = 0.0002  # 0.02% relative frequency
DEFAULT_ETA = 3
DEFAULT_GAMMA = 3

Phrase = tuple[str, ...]


@dataclass(frozen=True)
class PhraseSet:
    n_max: int
    phrases: dict[int, frozenset[Phrase]]
    frequencies: dict[Phrase, int]
    total_questions: int

    def assigned_phrase(self, question: Sequence[str], n: int) -> Phrase:
        """The phrase this question contributes at arity n.

        The leading n-gram when it was kept, otherwise the degraded leading
        unigram.
        """
        if not question:
            raise ValueError("question has no tokens")
        if not 1 <= n <= self.n_max:
            raise ValueError(f"n must be in 1..{self.n_max}")
        lead = tuple(question[:n])
        if len(lead) == n and lead in self.phrases[n]:
            return lead
        return (question[0],)

    def longest_match(self, tokens: Sequence[str]) -> Phrase | None:
        """Longest kept phrase matching the leading tokens, or None."""
        for n in range(min(self.n_max, len(tokens)), 0, -1):
            lead = tuple(tokens[:n])
            if lead in self.phrases[n]:
                return lead
        return None


def build_phrase_sets(questions: Sequence[Sequence[str]], n_max: int,
                      zeta: float = DEFAULT_ZETA) -> PhraseSet:
    """Collect leading n-grams for n = 1..n_max with frequency thresholding."""
    if not questions:
        raise ValueError("question corpus is empty")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if zeta < 0:
        raise ValueError("zeta must be >= 0")
    for i, q in enumerate(questions):
        if not q:
            raise ValueError(f"question {i} has no tokens")
    total = len(questions)
    counts: dict[Phrase, int] = {}
    for q in questions:
        for n in range(1, min(n_max, len(q)) + 1):
            lead = tuple(q[:n])
            counts[lead] = counts.get(lead, 0) + 1
    phrases: dict[int, frozenset[Phrase]] = {}
    for n in range(1, n_max + 1):
        observed = {p for p in counts if len(p) == n}
        if n == 1:
            phrases[n] = frozenset(observed)
        else:
            phrases[n] = frozenset(
                p for p in observed if counts[p] / total > zeta
            )
    return PhraseSet(n_max=n_max, phrases=phrases, frequencies=counts,
                     total_questions=total)


def save_phrase_set(phrase_set: PhraseSet, path: str | Path) -> None:
    """Write kept phrases as "n<TAB>phrase<TAB>count" lines, sorted."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for n in range(1, phrase_set.n_max + 1):
            for phrase in sorted(phrase_set.phrases[n]):
                fh.write(f"{n}\t{' '.join(phrase)}\t{phrase_set.frequencies[phrase]}\n")


def load_phrase_set(path: str | Path) -> PhraseSet:
    """Rebuild a PhraseSet from its serialized kept phrases.

    total_questions is recovered as the sum of unigram counts, since every
    question contributes exactly one leading unigram.
    """
    phrases: dict[int, set[Phrase]] = {}
    frequencies: dict[Phrase, int] = {}
    n_max = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3:
                raise FormatError(f"{path}:{lineno}: expected 3 tab-separated fields")
            try:
                n = int(parts[0])
                count = int(parts[2])
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: bad arity or count") from exc
            phrase = tuple(parts[1].split(" "))
            if n < 1 or len(phrase) != n:
                raise FormatError(f"{path}:{lineno}: phrase arity does not match n={n}")
            phrases.setdefault(n, set()).add(phrase)
            frequencies[phrase] = count
            n_max = max(n_max, n)
    if n_max == 0:
        raise FormatError(f"{path}: empty phrase set")
    total = sum(frequencies[p] for p in phrases.get(1, ()))
    return PhraseSet(
        n_max=n_max,
        phrases={n: frozenset(phrases.get(n, set())) for n in range(1, n_max + 1)},
        frequencies=frequencies,
        total_questions=total,
    )


@dataclass(frozen=True)
class Span:
    start: int
    end: int  # inclusive

    def __post_init__(self):
        if self.start < 0:
            raise ValueError("span start must be non-negative")
        if self.end < self.start:
            raise ValueError("span end must be >= start")

    @property
    def length(self) -> int:
        return self.end - self.start + 1


def _gap(left: Span, right: Span) -> int:
    """Tokens strictly between two spans."""
    return right.start - left.end - 1


def merge_and_drop(spans: Sequence[Span], token_count: int,
                   eta: int = DEFAULT_ETA, gamma: int = DEFAULT_GAMMA) -> list[Span]:
    """Keep long spans, merge close-sitting short ones, drop isolated shorts.

    Left to right: a span of length > eta is kept as-is.  A short span looks
    at the nearest remaining span (the last kept one on the left, the next
    pending one on the right; ties prefer the left); if the gap is < gamma
    the two merge, and the merged span is immediately re-evaluated, else the
    short span is dropped.
    """
    previous = None
    for span in spans:
        if span.end >= token_count:
            raise ValueError(f"span {span} exceeds token_count {token_count}")
        if previous is not None and span.start <= previous.end:
            raise ValueError("spans must be sorted and non-overlapping")
        previous = span
    pending = list(spans)
    pending.reverse()  # pop() now yields spans left to right
    kept: list[Span] = []
    while pending:
        current = pending.pop()
        if current.length > eta:
            kept.append(current)
            continue
        left_gap = _gap(kept[-1], current) if kept else None
        right_gap = _gap(current, pending[-1]) if pending else None
        if left_gap is not None and (right_gap is None or left_gap <= right_gap):
            nearest_gap, merge_left = left_gap, True
        elif right_gap is not None:
            nearest_gap, merge_left = right_gap, False
        else:
            continue  # no other span exists: drop
        if nearest_gap >= gamma:
            continue  # nearest span is too far: drop
        if merge_left:
            neighbor = kept.pop()
            pending.append(Span(neighbor.start, current.end))
        else:
            neighbor = pending.pop()
            pending.append(Span(current.start, neighbor.end))
    return kept


def save_spans(spans: Sequence[Span], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for span in spans:
            fh.write(f"{span.start}\t{span.end}\n")


def load_spans(path: str | Path) -> list[Span]:
    spans = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected 'start<TAB>end'")
            try:
                spans.append(Span(int(parts[0]), int(parts[1])))
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from exc
    return spans


def stratified_sample(pools: Mapping[str, Sequence[str]],
                      ratios: Mapping[str, float], total: int,
                      seed: int) -> list[str]:
    """Sample `total` items across strata in ratio proportion.

    Quotas come from largest-remainder apportionment, capped at pool size
    with the deficit re-apportioned over the remaining strata.  Within each
    stratum the draw is seeded sampling without replacement; strata are
    processed in pools' iteration order with one generator, so output is
    fully determined by (pools, ratios, total, seed).
    """
    if set(pools) != set(ratios):
        raise ValueError("ratio strata must match pool strata")
    if total < 1:
        raise ValueError("total must be >= 1")
    if any(r <= 0 for r in ratios.values()):
        raise ValueError("ratios must be positive")
    order = list(pools)
    capacity = sum(len(pools[s]) for s in order)
    if total > capacity:
        raise ValueError(f"total {total} exceeds combined pool size {capacity}")
    quotas: dict[str, int] = {}
    active = list(order)
    remaining = total
    while active:
        alloc = dict(zip(active, largest_remainder(remaining, [ratios[s] for s in active])))
        capped = [s for s in active if alloc[s] > len(pools[s])]
        if not capped:
            quotas.update(alloc)
            break
        for s in capped:
            quotas[s] = len(pools[s])
            remaining -= len(pools[s])
            active.remove(s)
        if not active:
            break
    rng = Xoshiro256StarStar(seed)
    chosen: list[str] = []
    for stratum in order:
        chosen.extend(rng.sample(pools[stratum], quotas.get(stratum, 0)))
    return chosen
