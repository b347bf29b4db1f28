"""Classic DE/rand/1/bin with fixed parameters, used as a comparison baseline."""
from __future__ import annotations

import numpy as np

from .core import Candidate, ConfigurationError, init_population, make_rng
from .optimizer import RunResult, Trace, fitness_error
from .variation import repair_bounds, select_survivor


def _distinct_rand(N: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Three indices per row, mutually distinct and distinct from the row."""
    rows = np.arange(n)
    picks = np.empty((n, 3), dtype=np.intp)
    for c in range(3):
        col = rng.integers(N, size=n)
        while True:
            bad = col == rows
            for prev in range(c):
                bad |= col == picks[:, prev]
            if not bad.any():
                break
            col[bad] = rng.integers(N, size=int(bad.sum()))
        picks[:, c] = col
    return picks


def baseline_de_rand1(problem, D: int, max_nfes: int | None = None, seed: int = 0,
                      F: float = 0.5, Cr: float = 0.9, pop_factor: int = 5) -> RunResult:
    """Run DE/rand/1/bin with ``N = pop_factor * D``; no adaptation of any kind."""
    if problem.D != D:
        raise ConfigurationError(f"problem has D={problem.D}, baseline has D={D}")
    max_nfes = 10000 * D if max_nfes is None else max_nfes
    N = max(4, pop_factor * D)
    if max_nfes <= N:
        raise ConfigurationError(f"budget {max_nfes} does not exceed the population {N}")
    rng = make_rng(seed)
    f_opt = getattr(problem, "f_opt", 0.0)
    pop = init_population(problem, N, rng)
    X, f = pop.X, pop.f
    nfes = N
    trace = Trace(nfes, max_nfes)
    trace.update(nfes, fitness_error(f.min(), f_opt))
    k = 0
    while nfes < max_nfes:
        k += 1
        n = min(N, max_nfes - nfes)
        idx = _distinct_rand(N, n, rng)
        V = X[idx[:, 0]] + F * (X[idx[:, 1]] - X[idx[:, 2]])
        j_rand = rng.integers(D, size=n)
        mask = rng.random((n, D)) < Cr
        mask[np.arange(n), j_rand] = True
        U = repair_bounds(np.where(mask, V, X[:n]), X[:n], problem.lower, problem.upper)
        fu = problem.evaluate_batch(U)
        nfes += n
        keep = select_survivor(f[:n], fu).offspring_survives
        X[:n][keep] = U[keep]
        f[:n][keep] = fu[keep]
        trace.update(nfes, fitness_error(f.min(), f_opt))
    b = int(np.argmin(f))
    best = Candidate(X[b].copy(), float(f[b]), True)
    return RunResult(best, fitness_error(best.fitness, f_opt), nfes, trace.entries, k)
