"""Pearson, Spearman and Kendall correlation with explicit tie handling.

Every coefficient returns ``None`` when it is undefined (a constant input,
or a fully tied variable for tau-b) instead of propagating NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

UNDEFINED = "undefined"


def _paired(a: Sequence[float], b: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(a, dtype=np.float64).ravel()
    y = np.asarray(b, dtype=np.float64).ravel()
    if x.size != y.size:
        raise ValueError(f"paired samples differ in length: {x.size} vs {y.size}")
    if x.size < 2:
        raise ValueError("correlation needs at least two observations")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("correlation inputs must be finite")
    return x, y


def rank(values: Sequence[float]) -> np.ndarray:
    """1-based fractional ranks; tied values share the mean of their positions."""
    a = np.asarray(values, dtype=np.float64).ravel()
    if a.size == 0:
        raise ValueError("rank needs at least one value")
    order = np.argsort(a, kind="mergesort")
    ranks = np.empty(a.size, dtype=np.float64)
    i = 0
    n = a.size
    while i < n:
        j = i
        while j + 1 < n and a[order[j + 1]] == a[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def pearson(a: Sequence[float], b: Sequence[float]) -> float | None:
    """Product-moment correlation, evaluated on centred data for stability."""
    x, y = _paired(a, b)
    x = x - x.mean()
    y = y - y.mean()
    sxx = float(np.dot(x, x))
    syy = float(np.dot(y, y))
    if sxx == 0.0 or syy == 0.0:
        return None
    r = float(np.dot(x, y)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def spearman(a: Sequence[float], b: Sequence[float]) -> float | None:
    x, y = _paired(a, b)
    return pearson(rank(x), rank(y))


def spearman_d2(a: Sequence[float], b: Sequence[float]) -> float:
    """``1 - 6 Σd² / (s(s²-1))``; equals :func:`spearman` only without ties."""
    x, y = _paired(a, b)
    d = rank(x) - rank(y)
    s = x.size
    return 1.0 - 6.0 * float(np.dot(d, d)) / (s * (s * s - 1.0))


@dataclass(frozen=True)
class PairCounts:
    """Pair classification for Kendall's tau.

    ``ties_a``/``ties_b`` count pairs tied in that variable (including joint
    ties); ``ties_ab`` counts pairs tied in both.
    """

    n_pairs: int
    concordant: int
    discordant: int
    ties_a: int
    ties_b: int
    ties_ab: int


def _tied_pairs(sorted_vals: np.ndarray) -> int:
    if sorted_vals.size == 0:
        return 0
    _, counts = np.unique(sorted_vals, return_counts=True)
    return int((counts * (counts - 1) // 2).sum())


def _count_swaps(seq: list[float]) -> int:
    """Stable bottom-up merge sort of ``seq`` in place; returns the inversion count."""
    n = len(seq)
    buf = seq[:]
    swaps = 0
    width = 1
    src, dst = seq, buf
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if src[j] < src[i]:
                    dst[k] = src[j]
                    swaps += mid - i
                    j += 1
                else:
                    dst[k] = src[i]
                    i += 1
                k += 1
            dst[k : k + mid - i] = src[i:mid]
            k += mid - i
            dst[k : k + hi - j] = src[j:hi]
        src, dst = dst, src
        width *= 2
    if src is not seq:
        seq[:] = src
    return swaps


def kendall_counts(a: Sequence[float], b: Sequence[float]) -> PairCounts:
    """Knight's O(s log s) pair counting: lexsort by (a, b), then count b-inversions."""
    x, y = _paired(a, b)
    s = x.size
    order = np.lexsort((y, x))
    xs, ys = x[order], y[order]
    ties_a = _tied_pairs(xs)

    ties_ab = 0
    start = 0
    for i in range(1, s + 1):
        if i == s or xs[i] != xs[start] or ys[i] != ys[start]:
            run = i - start
            ties_ab += run * (run - 1) // 2
            start = i

    ys_list = ys.tolist()
    swaps = _count_swaps(ys_list)
    ties_b = _tied_pairs(np.asarray(ys_list))

    n_pairs = s * (s - 1) // 2
    # pairs that are neither tied in a nor in b split into concordant/discordant
    untied = n_pairs - ties_a - ties_b + ties_ab
    discordant = swaps
    concordant = untied - discordant
    return PairCounts(n_pairs, concordant, discordant, ties_a, ties_b, ties_ab)


def tau_from_counts(c: PairCounts, variant: str = "tau_b") -> float | None:
    if variant == "tau_a":
        return (c.concordant - c.discordant) / c.n_pairs
    if variant == "tau_b":
        denom = (c.n_pairs - c.ties_a) * (c.n_pairs - c.ties_b)
        if denom == 0:
            return None
        tau = (c.concordant - c.discordant) / math.sqrt(denom)
        return max(-1.0, min(1.0, tau))
    raise ValueError(f"unknown Kendall variant {variant!r}")


def kendall(a: Sequence[float], b: Sequence[float], variant: str = "tau_b") -> float | None:
    """Kendall's tau. ``tau_a`` divides by all pairs; ``tau_b`` corrects for ties."""
    if variant not in ("tau_a", "tau_b"):
        raise ValueError(f"unknown Kendall variant {variant!r}")
    return tau_from_counts(kendall_counts(a, b), variant)


@dataclass(frozen=True)
class Coefficients:
    pearson: float | None
    spearman: float | None
    kendall_b: float | None
    kendall_a: float | None

    @classmethod
    def compute(cls, a: Sequence[float], b: Sequence[float]) -> Coefficients:
        counts = kendall_counts(a, b)
        return cls(
            pearson(a, b),
            spearman(a, b),
            tau_from_counts(counts, "tau_b"),
            tau_from_counts(counts, "tau_a"),
        )

    def as_tuple(self) -> tuple[float | None, ...]:
        return (self.pearson, self.spearman, self.kendall_b, self.kendall_a)


COEFFICIENT_NAMES = ("pearson", "spearman", "kendall_b", "kendall_a")


def mean_coefficients(runs: Sequence[Coefficients]) -> Coefficients:
    """Average each coefficient over the runs where it is defined."""
    values = []
    for name in COEFFICIENT_NAMES:
        defined = [getattr(r, name) for r in runs if getattr(r, name) is not None]
        values.append(sum(defined) / len(defined) if defined else None)
    return Coefficients(*values)


def format_coefficient(value: float | None) -> str:
    return UNDEFINED if value is None else f"{value:.6f}"


@dataclass
class CorrelationReport:
    network_id: str
    size: int
    model: str = ""
    pairs: dict[tuple[str, str], Coefficients] = field(default_factory=dict)
