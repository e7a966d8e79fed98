"""Finer-grained NLI labeling, annotation partitioning, and heuristic rules.

An item's annotations (integers in [-3, 3]) map to one of four labels:
Entailment, Neutral, Contradiction, or Disagreement for inherently
ambiguous items.  All threshold comparisons run in exact integer
arithmetic, so boundary distributions (mean exactly 1, fraction exactly
80%) behave identically everywhere.
"""

from __future__ import annotations

from typing import Sequence

from faqrank.corpus import NliItem

ENTAILMENT = "Entailment"
NEUTRAL = "Neutral"
CONTRADICTION = "Contradiction"
DISAGREEMENT = "Disagreement"
FINER_LABELS = (ENTAILMENT, NEUTRAL, CONTRADICTION, DISAGREEMENT)

AUX_ENTAILMENT = "entailment"
AUX_NEUTRAL = "neutral"
AUX_CONTRADICTION = "contradiction"
AUX_LABELS = (AUX_ENTAILMENT, AUX_NEUTRAL, AUX_CONTRADICTION)

NEG_RAISING_VERBS = frozenset({"know", "think", "believe"})


def _validate(annotations: Sequence[int]) -> None:
    if not annotations:
        raise ValueError("annotations must be non-empty")
    for a in annotations:
        if not -3 <= a <= 3:
            raise ValueError(f"annotation {a} outside [-3, 3]")


def finer_label(annotations: Sequence[int]) -> str:
    """Label an annotation distribution; Disagreement when nothing else fits.

    A category fires when at least 80% of annotations fall in its range, or
    when the population variance is <= 1 and the mean clears its threshold
    (> 1 entailment, within +/-0.5 neutral, < -1 contradiction).  Clause
    precedence is Entailment > Neutral > Contradiction.
    """
    _validate(annotations)
    n = len(annotations)
    total = sum(annotations)
    sq_total = sum(a * a for a in annotations)
    # population variance <= 1  <=>  n*sum(a^2) - total^2 <= n^2
    low_variance = n * sq_total - total * total <= n * n
    in_pos = sum(1 for a in annotations if 1 <= a <= 3)
    zeros = sum(1 for a in annotations if a == 0)
    in_neg = sum(1 for a in annotations if -3 <= a <= -1)
    if 5 * in_pos >= 4 * n or (low_variance and total > n):
        return ENTAILMENT
    if 5 * zeros >= 4 * n or (low_variance and 2 * abs(total) <= n):
        return NEUTRAL
    if 5 * in_neg >= 4 * n or (low_variance and total < -n):
        return CONTRADICTION
    return DISAGREEMENT


def partition(annotations: Sequence[int]) -> tuple[list[int], list[int], list[int]]:
    """Sort descending and slice into three near-equal contiguous parts.

    Sizes are floor(n/3) each, with the remainder going to the outer parts
    first: n = 3k+1 -> (k+1, k, k), n = 3k+2 -> (k+1, k, k+1), so 8
    annotations split 3/2/3.
    """
    _validate(annotations)
    n = len(annotations)
    if n < 3:
        raise ValueError("need at least 3 annotations to partition")
    base, rem = divmod(n, 3)
    if rem == 0:
        sizes = (base, base, base)
    elif rem == 1:
        sizes = (base + 1, base, base)
    else:
        sizes = (base + 1, base, base + 1)
    ordered = sorted(annotations, reverse=True)
    first = ordered[: sizes[0]]
    second = ordered[sizes[0] : sizes[0] + sizes[1]]
    third = ordered[sizes[0] + sizes[1] :]
    return first, second, third


def aux_label(part: Sequence[int]) -> str:
    """entailment when mean > 0.5, contradiction when mean < -0.5, else neutral."""
    _validate(part)
    n = len(part)
    total = sum(part)
    if 2 * total > n:
        return AUX_ENTAILMENT
    if 2 * total < -n:
        return AUX_CONTRADICTION
    return AUX_NEUTRAL


def combine_loss(r: float, loss_f: float, loss_e: float, loss_n: float,
                 loss_c: float) -> float:
    """Weighted total loss: r on the primary task, (1-r)/3 on each auxiliary."""
    if not 0 <= r <= 1:
        raise ValueError("r must be in [0, 1]")
    for name, value in (("loss_f", loss_f), ("loss_e", loss_e),
                        ("loss_n", loss_n), ("loss_c", loss_c)):
        if value < 0:
            raise ValueError(f"{name} must be >= 0")
    return r * loss_f + ((1 - r) / 3) * (loss_e + loss_n + loss_c)


def heuristic_label(environment: str, person: str, matrix_verb: str,
                    factive: bool) -> str:
    """Priority-ordered linguistic rules; first match wins.

    1. conditional environment          -> Disagreement
    2. question + second person         -> Neutral
    3. question + non-second person     -> Disagreement
    4. negation + first person + know/think/believe -> Contradiction
    5. factive matrix verb              -> Entailment
    6. negation + non-factive verb      -> Disagreement
    7. modal + non-third person         -> Entailment
    No match falls back to Disagreement, the dominant class.
    """
    verb = matrix_verb.strip().lower()
    if environment == "conditional":
        return DISAGREEMENT
    if environment == "question":
        return NEUTRAL if person == "second" else DISAGREEMENT
    if environment == "negation" and person == "first" and verb in NEG_RAISING_VERBS:
        return CONTRADICTION
    if factive:
        return ENTAILMENT
    if environment == "negation":
        return DISAGREEMENT
    if environment == "modal" and person != "third":
        return ENTAILMENT
    return DISAGREEMENT


def label_items(items: Sequence[NliItem], scheme: str) -> list[tuple[str, str]]:
    """Label a batch of items with the chosen scheme, as (id, label) pairs."""
    if scheme == "finer":
        return [(item.id, finer_label(item.annotations)) for item in items]
    if scheme == "heuristic":
        return [
            (item.id,
             heuristic_label(item.environment, item.person, item.matrix_verb,
                             item.factive))
            for item in items
        ]
    raise ValueError(f"unknown scheme '{scheme}' (expected 'finer' or 'heuristic')")
