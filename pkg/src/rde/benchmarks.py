"""Desk-scale benchmark functions with locally generated shifts and rotations.

Every base function takes a batch ``Z`` of shape ``(n, D)`` expressed on the
common [-100, 100] scale and has its minimum 0 at ``Z = 0``; functions with a
natural domain elsewhere rescale internally (the usual CEC convention).
A problem evaluates ``base(M (x - o))``.

These functions reproduce the CEC function classes only; the values are not
comparable with official CEC results.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

DEFAULT_BOUND = 100.0
SUITE_SEED = 2024
SCHWEFEL_OPT = 4.209687462275036e02


# --- base functions -------------------------------------------------------

def sphere(Z):
    return np.sum(Z * Z, axis=1)


def elliptic(Z):
    D = Z.shape[1]
    c = 1e6 ** (np.arange(D) / (D - 1)) if D > 1 else np.ones(1)
    return np.sum(c * Z * Z, axis=1)


def zakharov(Z):
    i = np.arange(1, Z.shape[1] + 1)
    s = np.sum(0.5 * i * Z, axis=1)
    return np.sum(Z * Z, axis=1) + s**2 + s**4


def rastrigin(Z):
    Y = Z * (5.12 / 100.0)
    return np.sum(Y * Y - 10.0 * np.cos(2.0 * np.pi * Y) + 10.0, axis=1)


def ackley(Z):
    D = Z.shape[1]
    a = -0.2 * np.sqrt(np.sum(Z * Z, axis=1) / D)
    b = np.sum(np.cos(2.0 * np.pi * Z), axis=1) / D
    val = -20.0 * np.exp(a) - np.exp(b) + 20.0 + np.e
    # exp(1) - e is not exactly 0 in floating point
    return np.maximum(val, 0.0)


def griewank(Z):
    Y = Z * (600.0 / 100.0)
    i = np.sqrt(np.arange(1, Z.shape[1] + 1))
    return np.sum(Y * Y, axis=1) / 4000.0 - np.prod(np.cos(Y / i), axis=1) + 1.0


def _schwefel_term(Y):
    D = Y.shape[1]
    out = Y * np.sin(np.sqrt(np.abs(Y)))
    hi = Y > 500.0
    lo = Y < -500.0
    if hi.any():
        m = 500.0 - np.fmod(Y[hi], 500.0)
        out[hi] = m * np.sin(np.sqrt(np.abs(m))) - (Y[hi] - 500.0) ** 2 / (10000.0 * D)
    if lo.any():
        m = np.fmod(np.abs(Y[lo]), 500.0) - 500.0
        out[lo] = m * np.sin(np.sqrt(np.abs(m))) - (Y[lo] + 500.0) ** 2 / (10000.0 * D)
    return out


_SCHWEFEL_PEAK = float(SCHWEFEL_OPT * np.sin(np.sqrt(SCHWEFEL_OPT)))


def schwefel(Z):
    """Modified Schwefel; shifted so the value at Z = 0 is exactly 0."""
    Y = Z * (1000.0 / 100.0) + SCHWEFEL_OPT
    return np.maximum(np.sum(_SCHWEFEL_PEAK - _schwefel_term(Y), axis=1), 0.0)


def rosenbrock(Z):
    Y = Z * (2.048 / 100.0) + 1.0
    return np.sum(100.0 * (Y[:, :-1] ** 2 - Y[:, 1:]) ** 2 + (Y[:, :-1] - 1.0) ** 2, axis=1)


def levy(Z):
    W = 1.0 + (Z * (10.0 / 100.0)) / 4.0
    head = np.sin(np.pi * W[:, 0]) ** 2
    mid = np.sum((W[:, :-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * W[:, :-1] + 1.0) ** 2), axis=1)
    tail = (W[:, -1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * W[:, -1]) ** 2)
    return head + mid + tail


BASE_FUNCTIONS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "sphere": sphere,
    "elliptic": elliptic,
    "zakharov": zakharov,
    "rastrigin": rastrigin,
    "ackley": ackley,
    "griewank": griewank,
    "schwefel": schwefel,
    "rosenbrock": rosenbrock,
    "levy": levy,
}


@dataclass(frozen=True)
class Hybrid:
    """Splits a permutation of the variables into blocks, one base function each."""

    perm: np.ndarray
    sizes: tuple[int, ...]
    parts: tuple[str, ...] = ("zakharov", "rosenbrock", "rastrigin")

    @classmethod
    def random(cls, D: int, rng: np.random.Generator, parts=("zakharov", "rosenbrock", "rastrigin"),
               fractions=(0.3, 0.3, 0.4)) -> "Hybrid":
        if D < len(parts):
            raise ValueError(f"hybrid needs D >= {len(parts)}")
        sizes = [max(1, int(np.ceil(fr * D))) for fr in fractions[:-1]]
        sizes.append(D - sum(sizes))
        if sizes[-1] < 1:
            raise ValueError("hybrid block sizes do not fit the dimension")
        return cls(rng.permutation(D), tuple(sizes), tuple(parts))

    def __call__(self, Z):
        Y = Z[:, self.perm]
        total = np.zeros(Z.shape[0])
        start = 0
        for size, name in zip(self.sizes, self.parts):
            block = Y[:, start:start + size]
            # Rosenbrock on one variable has no coupling term; fall back to sphere.
            fn = sphere if (name == "rosenbrock" and size < 2) else BASE_FUNCTIONS[name]
            total += fn(block)
            start += size
        return total


@dataclass(frozen=True)
class Composition:
    """Weighted blend of base functions around separate optima.

    The first component has bias 0 and its optimum at the origin of the
    transformed space, so the global minimum is 0 at ``Z = 0``.
    """

    optima: np.ndarray
    parts: tuple[str, ...] = ("rastrigin", "griewank", "schwefel")
    sigmas: tuple[float, ...] = (10.0, 20.0, 30.0)
    lambdas: tuple[float, ...] = (1.0, 10.0, 1.0)
    biases: tuple[float, ...] = (0.0, 100.0, 200.0)

    @classmethod
    def random(cls, D: int, rng: np.random.Generator, **kw) -> "Composition":
        n = len(kw.get("parts", cls.parts))
        optima = rng.uniform(-80.0, 80.0, size=(n, D))
        optima[0] = 0.0
        return cls(optima, **kw)

    def __call__(self, Z):
        n, D = Z.shape
        k = len(self.parts)
        vals = np.empty((n, k))
        w = np.empty((n, k))
        for c in range(k):
            diff = Z - self.optima[c]
            d2 = np.sum(diff * diff, axis=1)
            vals[:, c] = self.lambdas[c] * BASE_FUNCTIONS[self.parts[c]](diff) + self.biases[c]
            with np.errstate(divide="ignore"):
                w[:, c] = np.exp(-d2 / (2.0 * D * self.sigmas[c] ** 2)) / np.sqrt(d2)
        # At an optimum that component takes all the weight.
        hit = ~np.isfinite(w)
        rows = hit.any(axis=1)
        w[rows] = np.where(hit[rows], 1.0, 0.0)
        s = w.sum(axis=1)
        zero = s == 0
        w[zero] = 1.0 / k
        s[zero] = 1.0
        return np.sum(w / s[:, None] * vals, axis=1)


# --- problems ---------------------------------------------------------------

@dataclass
class ObjectiveFunction:
    """A box-bounded minimization problem ``f(x) = base(M (x - o)) + bias``."""

    name: str
    D: int
    base: Callable[[np.ndarray], np.ndarray]
    lower: np.ndarray = None
    upper: np.ndarray = None
    shift: np.ndarray | None = None
    rotation: np.ndarray | None = None
    f_opt: float = 0.0
    bias: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lower is None:
            self.lower = np.full(self.D, -DEFAULT_BOUND)
        if self.upper is None:
            self.upper = np.full(self.D, DEFAULT_BOUND)
        self.lower = np.broadcast_to(np.asarray(self.lower, float), (self.D,)).copy()
        self.upper = np.broadcast_to(np.asarray(self.upper, float), (self.D,)).copy()

    def transform(self, X):
        Z = np.asarray(X, dtype=float)
        if self.shift is not None:
            Z = Z - self.shift
        if self.rotation is not None:
            Z = Z @ self.rotation.T
        return Z

    def evaluate_batch(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.D:
            raise ValueError(f"{self.name}: expected shape (n, {self.D}), got {X.shape}")
        return self.base(self.transform(X)) + self.bias

    def evaluate(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.D,):
            raise ValueError(f"{self.name}: expected a vector of length {self.D}, got shape {x.shape}")
        return float(self.evaluate_batch(x[None, :])[0])

    __call__ = evaluate

    @property
    def optimizer(self) -> np.ndarray:
        return np.zeros(self.D) if self.shift is None else self.shift.copy()


def make_rotation(D: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix: QR of a Gaussian matrix with sign fix."""
    if D < 1:
        raise ValueError("D must be >= 1")
    A = rng.standard_normal((D, D))
    Q, R = np.linalg.qr(A)
    return Q * np.sign(np.diag(R))


def make_shift(D: int, rng: np.random.Generator, bound: float = 80.0) -> np.ndarray:
    return rng.uniform(-bound, bound, size=D)


def save_matrix(path, M) -> None:
    """Row-major decimal text, full round-trip precision."""
    np.savetxt(path, np.atleast_2d(M), fmt="%.17g")


def load_matrix(path) -> np.ndarray:
    return np.loadtxt(path, dtype=float, ndmin=2)


def save_transform(directory, problem: ObjectiveFunction) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    if problem.shift is not None:
        save_matrix(d / f"shift_{problem.name}_D{problem.D}.txt", problem.shift[None, :])
    if problem.rotation is not None:
        save_matrix(d / f"M_{problem.name}_D{problem.D}.txt", problem.rotation)


def load_transform(directory, name: str, D: int):
    d = Path(directory)
    shift = rot = None
    sp = d / f"shift_{name}_D{D}.txt"
    mp = d / f"M_{name}_D{D}.txt"
    if sp.exists():
        shift = load_matrix(sp)[0]
    if mp.exists():
        rot = load_matrix(mp)
    return shift, rot


PROBLEM_NAMES = tuple(BASE_FUNCTIONS) + ("hybrid", "composition")
DESK_SUITE = ("rastrigin", "ackley", "griewank", "schwefel", "rosenbrock", "hybrid")


def make_problem(name: str, D: int, shifted: bool = True, rotated: bool = True,
                 seed: int | None = None, transform_dir=None) -> ObjectiveFunction:
    """Build a named problem with a reproducible transform.

    Without an explicit ``seed`` the transform depends only on ``name`` and
    ``D``, so every run of an experiment sees the same landscape.
    """
    if name not in PROBLEM_NAMES:
        raise KeyError(f"unknown problem {name!r}; choose from {', '.join(PROBLEM_NAMES)}")
    if seed is None:
        seed = SUITE_SEED * 1000 + PROBLEM_NAMES.index(name) * 100 + D
    rng = np.random.default_rng(seed)
    if name == "hybrid":
        base = Hybrid.random(D, rng)
    elif name == "composition":
        base = Composition.random(D, rng)
    else:
        base = BASE_FUNCTIONS[name]
    shift = make_shift(D, rng) if shifted else None
    rot = make_rotation(D, rng) if rotated else None
    if transform_dir is not None:
        loaded_shift, loaded_rot = load_transform(transform_dir, name, D)
        shift = loaded_shift if loaded_shift is not None else shift
        rot = loaded_rot if loaded_rot is not None else rot
    return ObjectiveFunction(name, D, base, shift=shift, rotation=rot)
