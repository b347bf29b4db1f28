"""Result summaries, the Wilcoxon rank-sum comparison and W/T/L counting."""
from __future__ import annotations

import math
from collections import Counter
from typing import Iterable, NamedTuple, Sequence

import numpy as np

ERROR_FLOOR = 1e-8
BETTER, TIE, WORSE = "+", "=", "-"


def floor_errors(errors) -> np.ndarray:
    e = np.asarray(errors, dtype=float)
    return np.where(e < ERROR_FLOOR, 0.0, e)


def summarize(errors) -> tuple[float, float]:
    """Mean and sample standard deviation of floored errors.

    A single sample has SD 0 by convention.
    """
    e = floor_errors(errors)
    if e.size == 0:
        raise ValueError("cannot summarize an empty sample")
    sd = float(e.std(ddof=1)) if e.size > 1 else 0.0
    return float(e.mean()), sd


def rankdata(values) -> np.ndarray:
    """Average ranks (1-based), ties sharing the mean of their positions."""
    v = np.asarray(values, dtype=float)
    order = np.argsort(v, kind="mergesort")
    sv = v[order]
    ranks = np.empty(v.size)
    start = 0
    for end in range(1, v.size + 1):
        if end == v.size or sv[end] != sv[start]:
            ranks[order[start:end]] = 0.5 * (start + end - 1) + 1.0
            start = end
    return ranks


class RankSumResult(NamedTuple):
    statistic: float  # rank sum of the first sample
    z: float
    p_value: float


EXACT_MAX_N = 20


def _exact_two_sided(ranks: np.ndarray, n1: int, W: float) -> float:
    """P(|W' - E W| >= |W - E W|) under random relabelling, ties included.

    Counts subsets of size n1 by their sum of doubled (hence integer) ranks.
    """
    r2 = np.rint(2.0 * ranks).astype(np.int64)
    top = int(r2.sum())
    cnt = np.zeros((n1 + 1, top + 1))
    cnt[0, 0] = 1.0
    for r in r2:
        cnt[1:, r:] += cnt[:-1, :top + 1 - r].copy()
    dist = cnt[n1]
    mean2 = n1 * (ranks.size + 1)
    dev = abs(round(2.0 * W) - mean2)
    sums = np.arange(top + 1)
    return float(dist[np.abs(sums - mean2) >= dev].sum() / dist.sum())


def rank_sum_test(a, b, method: str = "auto") -> RankSumResult:
    """Two-sided rank-sum test.

    ``method="normal"`` uses the normal approximation with tie and continuity
    corrections; ``"exact"`` enumerates the permutation distribution. ``"auto"``
    goes exact when the pooled sample has at most ``EXACT_MAX_N`` values.
    """
    if method not in ("auto", "exact", "normal"):
        raise ValueError(f"unknown method {method!r}")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n1, n2 = a.size, b.size
    n = n1 + n2
    ranks = rankdata(np.concatenate([a, b]))
    W = float(ranks[:n1].sum())
    mean = n1 * (n + 1) / 2.0
    diff = W - mean
    _, counts = np.unique(np.concatenate([a, b]), return_counts=True)
    tie = float(np.sum(counts**3 - counts)) / (n * (n - 1)) if n > 1 else 0.0
    var = n1 * n2 / 12.0 * ((n + 1) - tie)
    if var <= 0:
        return RankSumResult(W, 0.0, 1.0)
    z = (abs(diff) - 0.5) / math.sqrt(var) if abs(diff) >= 0.5 else 0.0
    z = math.copysign(z, diff)
    if method == "exact" or (method == "auto" and n <= EXACT_MAX_N):
        p = _exact_two_sided(ranks, n1, W)
    else:
        p = math.erfc(abs(z) / math.sqrt(2.0))
    return RankSumResult(W, z, min(1.0, p))


def wilcoxon_rank_sum(a, b, alpha: float = 0.05) -> str:
    """Verdict for sample ``a`` against ``b`` (lower values are better).

    ``+`` when a is significantly better, ``-`` when significantly worse,
    ``=`` otherwise.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    a = floor_errors(a)
    b = floor_errors(b)
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be non-empty")
    if np.all(a == a[0]) and np.all(b == a[0]):
        return TIE
    res = rank_sum_test(a, b)
    if res.p_value >= alpha:
        return TIE
    # Below-average rank sum means smaller errors.
    return BETTER if res.z < 0 else WORSE


class WTL(NamedTuple):
    wins: int
    ties: int
    losses: int

    def __str__(self):
        return f"{self.wins}/{self.ties}/{self.losses}"


def wtl_table(verdicts: Iterable[str]) -> WTL:
    c = Counter(verdicts)
    unknown = set(c) - {BETTER, TIE, WORSE}
    if unknown:
        raise ValueError(f"unknown verdicts: {sorted(unknown)}")
    return WTL(c[BETTER], c[TIE], c[WORSE])


class ProblemComparison(NamedTuple):
    problem: str
    mean_a: float
    sd_a: float
    mean_b: float
    sd_b: float
    verdict: str


def compare_samples(samples_a: dict[str, Sequence[float]], samples_b: dict[str, Sequence[float]],
                    alpha: float = 0.05) -> list[ProblemComparison]:
    """Per-problem comparison of two result sets; both must cover the same problems."""
    if set(samples_a) != set(samples_b):
        missing = sorted(set(samples_a) ^ set(samples_b))
        raise ValueError(f"problem sets differ: {', '.join(missing)}")
    rows = []
    for prob in samples_a:
        ma, sa = summarize(samples_a[prob])
        mb, sb = summarize(samples_b[prob])
        rows.append(ProblemComparison(prob, ma, sa, mb, sb,
                                      wilcoxon_rank_sum(samples_a[prob], samples_b[prob], alpha)))
    return rows
