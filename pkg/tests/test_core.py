import numpy as np
import pytest

from rde.benchmarks import ObjectiveFunction, sphere
from rde.core import (
    ConfigurationError,
    ExternalArchive,
    Population,
    archive_extend,
    archive_insert,
    init_population,
    round_half_up,
)


def box(D, lo, hi):
    return ObjectiveFunction("sphere", D, sphere, lower=np.full(D, lo), upper=np.full(D, hi))


def test_init_population_in_bounds_and_sorted(rng):
    pop = init_population(box(10, -100, 100), 180, rng)
    assert pop.X.shape == (180, 10)
    assert np.all(pop.X >= -100) and np.all(pop.X <= 100)
    assert np.all(np.diff(pop.f) >= 0)
    # cached fitness is the objective at x
    assert np.allclose(pop.f, np.sum(pop.X**2, axis=1))


def test_init_population_degenerate_interval(rng):
    pop = init_population(box(4, 5.0, 5.0 + 1e-12), 8, rng)
    assert np.allclose(pop.X, 5.0)


def test_init_population_seeded():
    a = init_population(box(3, -1, 1), 10, np.random.default_rng(42))
    b = init_population(box(3, -1, 1), 10, np.random.default_rng(42))
    assert np.array_equal(a.X, b.X) and np.array_equal(a.f, b.f)


@pytest.mark.parametrize("lo,hi,N", [(1.0, 1.0, 10), (2.0, 1.0, 10), (-1.0, 1.0, 3)])
def test_init_population_rejects_bad_config(lo, hi, N, rng):
    with pytest.raises(ConfigurationError):
        init_population(box(2, lo, hi), N, rng)


def test_population_members_sorted_candidates():
    pop = Population(np.array([[3.0], [1.0], [2.0]]), np.array([9.0, 1.0, 4.0]))
    assert [c.fitness for c in pop.members] == [1.0, 4.0, 9.0]
    assert pop.best.x[0] == 1.0 and pop.best.fresh


def _filled(cap, size):
    a = ExternalArchive(1, cap)
    a._X[:size, 0] = np.arange(size)
    a._f[:size] = np.arange(size)
    a.size = size
    return a


def test_archive_insert_below_capacity(rng):
    a = _filled(5, 3)
    archive_insert(a, np.array([9.0]), 9.0, rng)
    assert a.size == 4 and 9.0 in a.f


def test_archive_insert_zero_capacity(rng):
    a = ExternalArchive(2, 0)
    archive_insert(a, np.zeros(2), 0.0, rng)
    assert a.size == 0


def test_archive_eviction_uniform():
    # Full archive: the new member stays, exactly one prior member leaves,
    # and each prior member is equally likely to go.
    rng = np.random.default_rng(7)
    trials = 10_000
    counts = np.zeros(5)
    for _ in range(trials):
        a = _filled(5, 5)
        archive_insert(a, np.array([99.0]), 99.0, rng)
        assert a.size == 5 and 99.0 in a.f
        gone = set(range(5)) - set(a.f.astype(int))
        assert len(gone) == 1
        counts[gone.pop()] += 1
    expected = trials / 5
    sigma = np.sqrt(trials * 0.2 * 0.8)
    assert np.all(np.abs(counts - expected) <= 3 * sigma)


def test_archive_resize_truncates(rng):
    a = _filled(5, 5)
    a.resize(3, rng)
    assert a.size == 3 and a.capacity == 3
    assert len(set(a.f)) == 3 and set(a.f) <= set(range(5))


def test_archive_extend_matches_sequential_inserts():
    for seed in range(20):
        data = np.random.default_rng(seed)
        X = data.random((25, 2))
        f = data.random(25)
        seq, bat = ExternalArchive(2, 6), ExternalArchive(2, 6)
        r1, r2 = np.random.default_rng(seed), np.random.default_rng(seed)
        for x, v in zip(X, f):
            archive_insert(seq, x, v, r1)
        archive_extend(bat, X, f, r2)
        assert np.array_equal(seq.X, bat.X) and np.array_equal(seq.f, bat.f)


@pytest.mark.parametrize("x,expected", [(0.5, 1), (1.5, 2), (2.4999, 2), (271.5, 272), (0.0, 0)])
def test_round_half_up(x, expected):
    assert round_half_up(x) == expected
