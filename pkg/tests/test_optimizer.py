import dataclasses

import numpy as np
import pytest

from rde.baseline import baseline_de_rand1
from rde.benchmarks import make_problem
from rde.core import ConfigurationError
from rde.optimizer import FLAGS, RDE_SPECIFIC, RunConfig, ablate, lshade_like, run


def test_defaults_follow_dimension():
    c = RunConfig(D=30)
    assert c.max_nfes == 300_000 and c.N_max == 540 and c.N_min == 4 and c.H == 5


@pytest.mark.parametrize("kw", [
    dict(N_min=3), dict(max_nfes=100, N_max=100), dict(H=0), dict(p_max=0), dict(k_r=-1),
    dict(rsp_scope="elite"), dict(memory_index="lifo"), dict(gamma_clamp=0.5),
])
def test_bad_config(kw):
    with pytest.raises(ConfigurationError):
        RunConfig(D=5, **kw)


def test_ablate():
    c = RunConfig(D=5)
    assert ablate(c, {}) == c
    assert ablate(c, {"enable_rsp": False}).enable_rsp is False
    with pytest.raises(ConfigurationError):
        ablate(c, {"enable_magic": True})
    lk = lshade_like(c)
    assert all(getattr(lk, k) == v for k, v in RDE_SPECIFIC.items()) and lk.rsp_scope == "r1r2"
    assert set(RDE_SPECIFIC) <= set(FLAGS)


def test_k_r_zero_equals_rsp_off():
    p = make_problem("rastrigin", 5)
    a = run(p, RunConfig(D=5, max_nfes=3000, seed=4, k_r=0.0))
    b = run(p, RunConfig(D=5, max_nfes=3000, seed=4, enable_rsp=False))
    assert a.error == b.error and np.array_equal(a.best.x, b.best.x)


def test_sphere_solved(sphere10):
    res = run(sphere10, RunConfig(D=10, seed=1))
    assert res.error == 0.0
    assert res.nfes_used == 100_000


def test_deterministic():
    p = make_problem("ackley", 5)
    cfg = RunConfig(D=5, max_nfes=5000, seed=11)
    a, b = run(p, cfg), run(p, cfg)
    assert a.error == b.error and a.trace == b.trace and np.array_equal(a.best.x, b.best.x)
    c = run(p, dataclasses.replace(cfg, seed=12))
    assert not np.array_equal(a.best.x, c.best.x)


@pytest.mark.parametrize("max_nfes", [1000, 1234, 5003])
def test_exact_evaluation_count(counting, max_nfes):
    p = counting(make_problem("griewank", 5))
    res = run(p, RunConfig(D=5, max_nfes=max_nfes, seed=0))
    assert p.calls == res.nfes_used == max_nfes


def test_population_shrinks_with_lpsr(counting):
    p = counting(make_problem("sphere", 5))
    run(p, RunConfig(D=5, max_nfes=5000, seed=0))
    assert p.batches[0] == 90 and p.batches[-2] < 20
    assert all(x >= y for x, y in zip(p.batches[1:-1], p.batches[2:-1]))


def test_population_constant_without_lpsr(counting):
    p = counting(make_problem("sphere", 5))
    run(p, RunConfig(D=5, max_nfes=5000, seed=0, enable_lpsr=False))
    assert set(p.batches[:-1]) == {90}


def test_trace_non_increasing_and_spans_budget():
    res = run(make_problem("schwefel", 5), RunConfig(D=5, max_nfes=5000, seed=2))
    errs = [e for _, e in res.trace]
    assert all(a >= b for a, b in zip(errs, errs[1:]))
    assert res.trace[-1][0] == 5000 and len(res.trace) == 16
    assert errs[-1] == res.error


@pytest.mark.parametrize("over", [
    {"enable_ord_pbest": False}, {"enable_cauchy_perturb": False}, {"rsp_scope": "r1r2"},
    {"memory_index": "random"}, {"perturb_scale_mode": "range_relative"},
    {"p_update": "per_generation"}, {"Ar": 0.0},
])
def test_variants_run_within_bounds(over):
    p = make_problem("hybrid", 5)
    res = run(p, ablate(RunConfig(D=5, max_nfes=2000, seed=3), over))
    assert np.all(res.best.x >= p.lower) and np.all(res.best.x <= p.upper)
    assert res.best.fitness == pytest.approx(p(res.best.x))


def test_baseline(counting, sphere10):
    p = counting(sphere10)
    res = baseline_de_rand1(p, 10, max_nfes=30_000, seed=0)
    assert p.calls == res.nfes_used == 30_000
    assert res.error < 1e-2
    with pytest.raises(ConfigurationError):
        baseline_de_rand1(sphere10, 5)
