import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import mannwhitneyu

from rde.stats import (
    BETTER,
    TIE,
    WORSE,
    WTL,
    compare_samples,
    rank_sum_test,
    rankdata,
    summarize,
    wilcoxon_rank_sum,
    wtl_table,
)


def test_summarize_examples():
    assert summarize([1, 2, 3]) == (2.0, 1.0)
    assert summarize([5e-9, 1e-9]) == (0.0, 0.0)
    assert summarize([4.0]) == (4.0, 0.0)
    with pytest.raises(ValueError):
        summarize([])


def test_rankdata_ties():
    assert rankdata([10, 20, 10, 30]).tolist() == [1.5, 3.0, 1.5, 4.0]


sample = st.lists(st.floats(0, 100, allow_nan=False), min_size=1, max_size=30)


@settings(max_examples=200)
@given(sample, sample)
def test_p_value_matches_scipy(a, b):
    if len(set(a + b)) == 1:
        return
    ours = rank_sum_test(a, b, method="normal").p_value
    ref = mannwhitneyu(a, b, alternative="two-sided", method="asymptotic", use_continuity=True).pvalue
    assert ours == pytest.approx(ref, abs=1e-12)


@given(sample, sample)
def test_verdict_antisymmetry(a, b):
    flip = {BETTER: WORSE, WORSE: BETTER, TIE: TIE}
    assert wilcoxon_rank_sum(b, a) == flip[wilcoxon_rank_sum(a, b)]


@given(sample, sample)
def test_alpha_monotone(a, b):
    if wilcoxon_rank_sum(a, b, 0.01) != TIE:
        assert wilcoxon_rank_sum(a, b, 0.05) == wilcoxon_rank_sum(a, b, 0.01)


def test_identical_samples_tie():
    assert wilcoxon_rank_sum([0.0] * 25, [1e-9] * 25) == TIE
    assert wilcoxon_rank_sum([3.0] * 5, [3.0] * 5) == TIE


def test_clear_difference():
    assert wilcoxon_rank_sum(np.arange(25), np.arange(25) + 100) == BETTER
    assert wilcoxon_rank_sum(np.arange(25) + 100, np.arange(25)) == WORSE


def test_bad_inputs():
    with pytest.raises(ValueError):
        wilcoxon_rank_sum([1.0], [2.0], alpha=0)
    with pytest.raises(ValueError):
        wilcoxon_rank_sum([], [2.0])


def exact_permutation_p(a, b):
    """Two-sided exact p-value of the rank-sum statistic by enumerating splits."""
    pooled = list(a) + list(b)
    r = rankdata(pooled)
    n1 = len(a)
    mean = n1 * (len(pooled) + 1) / 2
    obs = abs(sum(r[:n1]) - mean)
    hits = total = 0
    for idx in itertools.combinations(range(len(pooled)), n1):
        total += 1
        if abs(sum(r[i] for i in idx) - mean) >= obs - 1e-9:
            hits += 1
    return hits / total


def test_exact_oracle_self_check():
    # fully separated 3 vs 3: only 2 of 20 splits are as extreme
    assert exact_permutation_p([1, 2, 3], [4, 5, 6]) == pytest.approx(0.1)


@settings(max_examples=100)
@given(st.lists(st.integers(0, 5), min_size=1, max_size=7), st.lists(st.integers(0, 5), min_size=1, max_size=7))
def test_exact_p_matches_enumeration(a, b):
    if len(set(a + b)) == 1:
        return
    assert rank_sum_test(a, b, method="exact").p_value == pytest.approx(exact_permutation_p(a, b), abs=1e-12)


def test_agreement_with_exact_permutation():
    rng = np.random.default_rng(11)
    agree = 0
    for _ in range(200):
        n1, n2 = rng.integers(3, 9, size=2)
        a = rng.normal(5, 1, n1).round(1)
        b = rng.normal(5 + rng.uniform(0, 2), 1, n2).round(1)
        p = exact_permutation_p(a, b)
        want = TIE if p >= 0.05 else (BETTER if np.mean(rankdata(np.r_[a, b])[:n1]) < (n1 + n2 + 1) / 2 else WORSE)
        agree += wilcoxon_rank_sum(a, b) == want
    assert agree >= 196


def test_wtl():
    assert wtl_table("++=-+") == WTL(3, 1, 1)
    assert str(WTL(1, 2, 3)) == "1/2/3"
    with pytest.raises(ValueError):
        wtl_table(["?"])


def test_compare_samples():
    a = {"p": [1.0] * 5, "q": list(range(10))}
    rows = compare_samples(a, a)
    assert [r.verdict for r in rows] == [TIE, TIE]
    with pytest.raises(ValueError):
        compare_samples(a, {"p": [1.0]})


def test_normal_tail_reference():
    # z = 1.959964 gives the textbook 5% two-sided tail
    assert math.erfc(1.959963984540054 / math.sqrt(2)) == pytest.approx(0.05, abs=1e-12)
