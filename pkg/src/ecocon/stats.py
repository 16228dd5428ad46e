"""Nonparametric statistics: Spearman rho, Kruskal-Wallis H, Cliff's delta.

Strength and magnitude labels follow the usual correlation scale
(negligible/weak/moderate/strong/very strong on |rho|) and the
0.147/0.33/0.474 effect-size cuts for |delta|.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Sequence

from scipy.special import gammaincc

from .errors import (
    EmptyGroup,
    EmptySample,
    LengthMismatch,
    TooFewGroups,
    TooFewSamples,
)


@dataclass(frozen=True)
class CorrelationResult:
    rho: float
    n: int
    strength: str


@dataclass(frozen=True)
class KruskalResult:
    h: float
    df: int
    p: float


@dataclass(frozen=True)
class EffectSize:
    delta: float
    magnitude: str


def correlation_strength(rho: float) -> str:
    r = abs(rho)
    if math.isnan(r):
        return "undefined"  # a constant series has no rank order
    if r < 0.1:
        return "negligible"
    if r < 0.4:
        return "weak"
    if r < 0.7:
        return "moderate"
    if r < 0.9:
        return "strong"
    return "very strong"


def effect_magnitude(delta: float) -> str:
    d = abs(delta)
    if d < 0.147:
        return "Negligible"
    if d < 0.33:
        return "Small"
    if d < 0.474:
        return "Medium"
    return "Large"


def average_ranks(values: Sequence[float]) -> list[float]:
    """1-based ranks; tied values share the mean of their rank span."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def _pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    if sxx == 0 or syy == 0:
        return math.nan
    return sxy / math.sqrt(sxx * syy)


def spearman(xs: Sequence[float], ys: Sequence[float]) -> CorrelationResult:
    """Rank correlation: Pearson on average-ranked data."""
    if len(xs) != len(ys):
        raise LengthMismatch(f"{len(xs)} vs {len(ys)} samples")
    if len(xs) < 3:
        raise TooFewSamples("spearman needs at least 3 pairs")
    rho = _pearson(average_ranks(xs), average_ranks(ys))
    return CorrelationResult(rho, len(xs), correlation_strength(rho))


def kruskal_wallis(groups: Sequence[Sequence[float]]) -> KruskalResult:
    """Tie-corrected H with a chi-square upper-tail p-value (df = k - 1)."""
    if len(groups) < 2:
        raise TooFewGroups("kruskal_wallis needs at least 2 groups")
    for g in groups:
        if not g:
            raise EmptyGroup("kruskal_wallis groups must be non-empty")
    pooled = [x for g in groups for x in g]
    n = len(pooled)
    if n < 5:
        raise TooFewSamples("kruskal_wallis needs at least 5 observations")

    ranks = average_ranks(pooled)
    h = 0.0
    start = 0
    for g in groups:
        r = sum(ranks[start:start + len(g)])
        h += r * r / len(g)
        start += len(g)
    h = 12.0 / (n * (n + 1)) * h - 3.0 * (n + 1)

    tie_sum = 0
    seen: dict = {}
    for x in pooled:
        seen[x] = seen.get(x, 0) + 1
    for t in seen.values():
        tie_sum += t ** 3 - t
    correction = 1.0 - tie_sum / (n ** 3 - n)
    if correction == 0.0:
        # every pooled value identical: no between-group variation
        h = 0.0
    else:
        h /= correction
    h = max(h, 0.0)

    df = len(groups) - 1
    p = float(gammaincc(df / 2.0, h / 2.0))
    return KruskalResult(h, df, p)


def cliffs_delta(a: Sequence[float], b: Sequence[float]) -> EffectSize:
    """(#{x > y} - #{x < y}) / (|a| |b|), counted via a sorted scan of b."""
    if not a or not b:
        raise EmptySample("cliffs_delta samples must be non-empty")
    sorted_b = sorted(b)
    greater = lesser = 0
    for x in a:
        greater += bisect_left(sorted_b, x)  # pairs with x > y
        lesser += len(sorted_b) - bisect_right(sorted_b, x)  # pairs with x < y
    delta = (greater - lesser) / (len(a) * len(b))
    return EffectSize(delta, effect_magnitude(delta))
