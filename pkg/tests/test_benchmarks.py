import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rde.benchmarks import (
    BASE_FUNCTIONS,
    DESK_SUITE,
    PROBLEM_NAMES,
    Hybrid,
    load_matrix,
    make_problem,
    make_rotation,
    save_matrix,
    save_transform,
)


def rastrigin_scalar(z):
    y = [v * 5.12 / 100 for v in z]
    return sum(v * v - 10 * math.cos(2 * math.pi * v) + 10 for v in y)


def rosenbrock_scalar(z):
    y = [v * 2.048 / 100 + 1 for v in z]
    return sum(100 * (y[i] ** 2 - y[i + 1]) ** 2 + (y[i] - 1) ** 2 for i in range(len(y) - 1))


def ackley_scalar(z):
    D = len(z)
    return (-20 * math.exp(-0.2 * math.sqrt(sum(v * v for v in z) / D))
            - math.exp(sum(math.cos(2 * math.pi * v) for v in z) / D) + 20 + math.e)


@pytest.mark.parametrize("fn,oracle", [
    ("rastrigin", rastrigin_scalar), ("rosenbrock", rosenbrock_scalar), ("ackley", ackley_scalar),
])
def test_base_functions_against_scalar_code(fn, oracle):
    rng = np.random.default_rng(3)
    Z = rng.uniform(-100, 100, size=(50, 7))
    got = BASE_FUNCTIONS[fn](Z)
    want = [max(oracle(list(z)), 0.0) for z in Z]
    assert np.allclose(got, want, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("name", list(BASE_FUNCTIONS))
def test_base_minimum_zero_at_origin(name):
    assert BASE_FUNCTIONS[name](np.zeros((1, 6)))[0] == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("name", PROBLEM_NAMES)
def test_nonnegative_and_zero_at_optimum(name):
    p = make_problem(name, 10)
    rng = np.random.default_rng(4)
    vals = np.concatenate([p.evaluate_batch(rng.uniform(-100, 100, size=(20_000, 10)))
                           for _ in range(5)])
    assert np.all(vals >= 0)
    assert p(p.optimizer) == pytest.approx(0.0, abs=1e-8)


def test_transform_matches_definition():
    p = make_problem("rastrigin", 5)
    x = np.random.default_rng(5).uniform(-100, 100, 5)
    z = p.rotation @ (x - p.shift)
    assert p(x) == pytest.approx(BASE_FUNCTIONS["rastrigin"](z[None, :])[0], rel=1e-12)


@pytest.mark.parametrize("D", [1, 2, 10, 30, 50])
def test_rotation_orthogonal(D):
    M = make_rotation(D, np.random.default_rng(D))
    assert np.max(np.abs(M @ M.T - np.eye(D))) < 1e-10
    if D == 1:
        assert abs(M[0, 0]) == 1.0


def test_problem_transform_reproducible():
    a, b = make_problem("griewank", 10), make_problem("griewank", 10)
    assert np.array_equal(a.shift, b.shift) and np.array_equal(a.rotation, b.rotation)
    c = make_problem("griewank", 10, seed=99)
    assert not np.array_equal(a.shift, c.shift)


def test_matrix_file_round_trip(tmp_path):
    M = make_rotation(10, np.random.default_rng(0))
    save_matrix(tmp_path / "m.txt", M)
    assert np.array_equal(load_matrix(tmp_path / "m.txt"), M)


def test_transform_dir_round_trip(tmp_path):
    p = make_problem("schwefel", 10, seed=123)
    save_transform(tmp_path, p)
    q = make_problem("schwefel", 10, transform_dir=tmp_path)
    assert np.array_equal(p.shift, q.shift) and np.array_equal(p.rotation, q.rotation)


@settings(max_examples=50)
@given(st.integers(3, 60), st.integers(0, 2**32 - 1))
def test_hybrid_partition_is_bijection(D, seed):
    h = Hybrid.random(D, np.random.default_rng(seed))
    assert sorted(h.perm.tolist()) == list(range(D))
    assert sum(h.sizes) == D and min(h.sizes) >= 1


def test_evaluate_shape_errors():
    p = make_problem("sphere", 4)
    with pytest.raises(ValueError):
        p.evaluate_batch(np.zeros((3, 5)))
    with pytest.raises(ValueError):
        p.evaluate(np.zeros(3))


def test_unknown_problem():
    with pytest.raises(KeyError):
        make_problem("nope", 10)


def test_desk_suite_names():
    assert set(DESK_SUITE) <= set(PROBLEM_NAMES) and len(DESK_SUITE) == 6
