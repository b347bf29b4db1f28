"""Basic data types: candidates, the sorted population and the external archive.

All randomness flows through a single ``numpy.random.Generator`` per run.
Every function that needs randomness takes it explicitly, so a run is
replayable from its seed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class ConfigurationError(ValueError):
    """Raised for invalid bounds, sizes, budgets or unknown flags."""


def make_rng(seed: int | None) -> np.random.Generator:
    return np.random.default_rng(seed)


def round_half_up(x: float) -> int:
    """Round to nearest integer, halves going up (C ``round`` for x >= 0)."""
    return int(np.floor(x + 0.5))


@dataclass
class Candidate:
    x: np.ndarray
    fitness: float = float("nan")
    fresh: bool = False


class Population:
    """Decision vectors ``X`` (N x D) and fitness ``f``, kept sorted by fitness.

    Row ``i`` is rank ``i + 1``; the best member sits in row 0.
    """

    def __init__(self, X: np.ndarray, f: np.ndarray, generation: int = 1):
        self.X = np.asarray(X, dtype=float)
        self.f = np.asarray(f, dtype=float)
        self.generation = generation
        self.sort()

    def sort(self) -> None:
        order = np.argsort(self.f, kind="stable")
        self.X = self.X[order]
        self.f = self.f[order]

    def truncate(self, n: int) -> None:
        """Drop the worst members so that ``n`` remain."""
        self.X = self.X[:n]
        self.f = self.f[:n]

    @property
    def size(self) -> int:
        return self.f.shape[0]

    @property
    def best(self) -> Candidate:
        return Candidate(self.X[0].copy(), float(self.f[0]), True)

    @property
    def members(self) -> list[Candidate]:
        return [Candidate(x.copy(), float(v), True) for x, v in zip(self.X, self.f)]

    def __len__(self) -> int:
        return self.size


def init_population(problem, N: int, rng: np.random.Generator) -> Population:
    """Uniformly sample ``N`` points inside the problem box and evaluate them.

    The caller owns the evaluation counter; this consumes exactly ``N``
    evaluations.
    """
    if N < 4:
        raise ConfigurationError(f"population size must be >= 4, got {N}")
    lower = np.asarray(problem.lower, dtype=float)
    upper = np.asarray(problem.upper, dtype=float)
    if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
        raise ConfigurationError("bounds must be finite")
    if np.any(lower >= upper):
        raise ConfigurationError("every lower bound must be below its upper bound")
    X = rng.uniform(lower, upper, size=(N, lower.shape[0]))
    return Population(X, problem.evaluate_batch(X))


@dataclass
class ExternalArchive:
    """Defeated parents, stored with their fitness.

    Storage is preallocated for ``max_capacity`` rows; only the first
    ``size`` rows are live.
    """

    dim: int
    capacity: int
    max_capacity: int | None = None
    size: int = 0
    _X: np.ndarray = field(init=False, repr=False)
    _f: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.max_capacity is None:
            self.max_capacity = self.capacity
        self._X = np.empty((max(self.max_capacity, 0), self.dim))
        self._f = np.empty(max(self.max_capacity, 0))

    @property
    def X(self) -> np.ndarray:
        return self._X[: self.size]

    @property
    def f(self) -> np.ndarray:
        return self._f[: self.size]

    def __len__(self) -> int:
        return self.size

    def resize(self, capacity: int, rng: np.random.Generator) -> None:
        """Shrink (or grow) the capacity; excess members are dropped at random."""
        capacity = min(max(capacity, 0), self.max_capacity)
        self.capacity = capacity
        excess = self.size - capacity
        if excess > 0:
            keep = np.sort(rng.choice(self.size, size=capacity, replace=False))
            self._X[:capacity] = self._X[keep]
            self._f[:capacity] = self._f[keep]
            self.size = capacity


def archive_insert(
    archive: ExternalArchive, x: np.ndarray, fitness: float, rng: np.random.Generator
) -> ExternalArchive:
    """Add a defeated parent; when full, a uniformly chosen old member makes room."""
    if archive.capacity <= 0:
        return archive
    if archive.size < archive.capacity:
        slot = archive.size
        archive.size += 1
    else:
        slot = int(rng.integers(archive.size))
    archive._X[slot] = x
    archive._f[slot] = fitness
    return archive


def archive_extend(
    archive: ExternalArchive, X: np.ndarray, f: np.ndarray, rng: np.random.Generator
) -> ExternalArchive:
    """Insert rows of ``X`` in order; same semantics as repeated :func:`archive_insert`.

    Once the archive is full every further insert overwrites a uniform slot,
    so the slots for all overflowing rows are drawn in one call.
    """
    m = X.shape[0]
    if archive.capacity <= 0 or m == 0:
        return archive
    free = min(archive.capacity - archive.size, m)
    if free > 0:
        archive._X[archive.size:archive.size + free] = X[:free]
        archive._f[archive.size:archive.size + free] = f[:free]
        archive.size += free
    rest = m - free
    if rest > 0:
        slots = rng.integers(archive.size, size=rest)
        # later rows win when a slot is hit twice
        last = {int(s): free + j for j, s in enumerate(slots)}
        idx = np.fromiter(last.keys(), dtype=np.intp, count=len(last))
        src = np.fromiter(last.values(), dtype=np.intp, count=len(last))
        archive._X[idx] = X[src]
        archive._f[idx] = f[src]
    return archive
