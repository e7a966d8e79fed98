"""Generation evaluation: diversity, relevance, and question-type metrics.

Diversity (Distinct-n, Entropy-n) is computed over corpus-level n-gram
counts; relevance uses smoothed sentence BLEU and LCS-based ROUGE-L; the
question-type metrics classify questions by their longest matching leading
phrase and compare type distributions with smoothed KL divergence.
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass
from typing import Sequence

from faqrank import _kernels
from faqrank.qpp_tools import PhraseSet
from faqrank.text import ngrams

BLEU_EPSILON = 1e-9
ROUGE_BETA = 1.2
OTHER_TYPE = "OTHER"

TokenSeq = Sequence[str]


@dataclass(frozen=True)
class NgramDistribution:
    n: int
    counts: dict[tuple[str, ...], int]
    total: int


def ngram_distribution(corpus: Sequence[TokenSeq], n: int) -> NgramDistribution:
    counts: dict[tuple[str, ...], int] = {}
    total = 0
    for tokens in corpus:
        for gram in ngrams(tokens, n):
            counts[gram] = counts.get(gram, 0) + 1
            total += 1
    return NgramDistribution(n=n, counts=counts, total=total)


def distinct_n(corpus: Sequence[TokenSeq], n: int) -> float:
    """Distinct n-gram types over total n-gram occurrences."""
    dist = ngram_distribution(corpus, n)
    if dist.total == 0:
        raise ValueError(f"corpus contains no {n}-grams")
    return len(dist.counts) / dist.total


def entropy_n(corpus: Sequence[TokenSeq], n: int) -> float:
    """Shannon entropy (natural log) of the corpus n-gram distribution."""
    dist = ngram_distribution(corpus, n)
    if dist.total == 0:
        raise ValueError(f"corpus contains no {n}-grams")
    entropy = 0.0
    for count in dist.counts.values():
        p = count / dist.total
        entropy -= p * math.log(p)
    return entropy


def _clipped_precision(candidate: TokenSeq, references: Sequence[TokenSeq],
                       n: int) -> float:
    cand_grams = ngrams(candidate, n)
    if not cand_grams:
        return 0.0
    cand_counts: dict[tuple[str, ...], int] = {}
    for gram in cand_grams:
        cand_counts[gram] = cand_counts.get(gram, 0) + 1
    max_ref: dict[tuple[str, ...], int] = {}
    for ref in references:
        ref_counts: dict[tuple[str, ...], int] = {}
        for gram in ngrams(ref, n):
            ref_counts[gram] = ref_counts.get(gram, 0) + 1
        for gram, count in ref_counts.items():
            if count > max_ref.get(gram, 0):
                max_ref[gram] = count
    clipped = sum(min(count, max_ref.get(gram, 0)) for gram, count in cand_counts.items())
    return clipped / len(cand_grams)


def bleu_n(candidate: TokenSeq, references: Sequence[TokenSeq],
           max_n: int = 4) -> float:
    """Sentence BLEU with add-epsilon smoothing and brevity penalty.

    Geometric mean of clipped n-gram precisions for n = 1..max_n; zero
    precisions are floored at 1e-9.  The brevity penalty uses the reference
    length closest to the candidate's (ties toward the shorter reference).
    """
    if not candidate:
        raise ValueError("candidate must be non-empty")
    if not references:
        raise ValueError("at least one reference is required")
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    log_sum = 0.0
    for n in range(1, max_n + 1):
        p = _clipped_precision(candidate, references, n)
        if p == 0.0:
            p = BLEU_EPSILON
        log_sum += math.log(p)
    geo_mean = math.exp(log_sum / max_n)
    c = len(candidate)
    r = min((len(ref) for ref in references), key=lambda L: (abs(L - c), L))
    bp = min(1.0, math.exp(1 - r / c))
    return geo_mean * bp


def rouge_l(candidate: TokenSeq, reference: TokenSeq) -> float:
    """LCS F-measure with beta = 1.2; 0 when there is no common subsequence."""
    if not candidate or not reference:
        raise ValueError("candidate and reference must be non-empty")
    vocab: dict[str, int] = {}
    def encode(tokens: TokenSeq) -> array:
        return array("q", [vocab.setdefault(t, len(vocab)) for t in tokens])
    lcs = _kernels.lcs_length(encode(candidate), encode(reference))
    if lcs == 0:
        return 0.0
    precision = lcs / len(candidate)
    recall = lcs / len(reference)
    beta_sq = ROUGE_BETA * ROUGE_BETA
    return (1 + beta_sq) * precision * recall / (recall + beta_sq * precision)


def top1_relevance(candidates: Sequence[TokenSeq], reference: TokenSeq,
                   metric: str, max_n: int = 4) -> float:
    """Best metric value over the candidates against one reference."""
    if not candidates:
        raise ValueError("at least one candidate is required")
    if metric == "bleu":
        return max(bleu_n(c, [reference], max_n=max_n) for c in candidates)
    if metric == "rouge_l":
        return max(rouge_l(c, reference) for c in candidates)
    raise ValueError(f"unknown metric '{metric}' (expected 'bleu' or 'rouge_l')")


def question_type(question: TokenSeq, phrase_set: PhraseSet) -> str:
    """Longest phrase matching the question's leading tokens, else OTHER."""
    match = phrase_set.longest_match(question)
    return " ".join(match) if match is not None else OTHER_TYPE


@dataclass(frozen=True)
class TypeDistribution:
    probabilities: dict[str, float]

    def __post_init__(self):
        if any(p < 0 for p in self.probabilities.values()):
            raise ValueError("probabilities must be non-negative")
        total = sum(self.probabilities.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {total}, expected 1")


def type_distribution(corpus: Sequence[TokenSeq],
                      phrase_set: PhraseSet) -> TypeDistribution:
    """Empirical distribution of question types over a corpus."""
    if not corpus:
        raise ValueError("corpus is empty")
    counts: dict[str, int] = {}
    for question in corpus:
        label = question_type(question, phrase_set)
        counts[label] = counts.get(label, 0) + 1
    total = len(corpus)
    return TypeDistribution({label: c / total for label, c in sorted(counts.items())})


def kl_divergence(p: TypeDistribution, q: TypeDistribution,
                  epsilon: float = 1e-6) -> float:
    """KL(p || q) over the union support, with epsilon flooring.

    Both distributions are extended to the union of supports, floored at
    epsilon, and renormalized, so disjoint supports stay finite.  p is the
    generated distribution, q the ground truth.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    support = sorted(set(p.probabilities) | set(q.probabilities))

    def smooth(dist: TypeDistribution) -> dict[str, float]:
        floored = {label: max(dist.probabilities.get(label, 0.0), epsilon)
                   for label in support}
        total = sum(floored.values())
        return {label: value / total for label, value in floored.items()}

    ps = smooth(p)
    qs = smooth(q)
    return sum(ps[label] * math.log(ps[label] / qs[label]) for label in support)
