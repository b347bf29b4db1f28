"""Mutation operators and the split of the population between them.

Both operators broadcast: pass single vectors with a scalar ``F`` or
stacked rows with ``F`` shaped ``(n, 1)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import round_half_up

ORDER_PBEST = 1
PBEST = 2


def mutate_pbest(x_i, F, x_pbest, x_r1, x_r2):
    """DE/current-to-pbest/1: ``x_i + F (x_pbest - x_i) + F (x_r1 - x_r2)``."""
    return x_i + F * (x_pbest - x_i) + F * (x_r1 - x_r2)


def order_picks(f_a, f_b, f_c) -> np.ndarray:
    """Indices (0, 1, 2 for a, b, c) sorted best to worst, stable on ties.

    Scalars give shape ``(3,)``; arrays of length n give ``(n, 3)``.
    """
    f = np.stack(np.broadcast_arrays(f_a, f_b, f_c), axis=-1)
    return np.argsort(f, axis=-1, kind="stable")


def mutate_ord_pbest(x_i, F, x_a, x_b, x_c, f_a, f_b, f_c):
    """DE/current-to-order-pbest/1.

    The three picks are sorted by fitness into best, median and worst, and
    then fed to the current-to-pbest formula in that order.
    """
    xs = np.stack(np.broadcast_arrays(x_a, x_b, x_c), axis=-2)
    order = order_picks(f_a, f_b, f_c)
    ranked = np.take_along_axis(xs, order[..., :, None], axis=-2)
    best, median, worst = ranked[..., 0, :], ranked[..., 1, :], ranked[..., 2, :]
    return mutate_pbest(x_i, F, best, median, worst)


@dataclass
class StrategyAssignment:
    labels: np.ndarray
    gamma1: float

    @property
    def n_order(self) -> int:
        return int(np.count_nonzero(self.labels == ORDER_PBEST))


def clamp_gamma(gamma1: float, gamma_min: float) -> float:
    if gamma_min <= 0:
        return float(gamma1)
    return float(min(max(gamma1, gamma_min), 1.0 - gamma_min))


def assign_strategies(N: int, gamma1: float, rng: np.random.Generator,
                      gamma_min: float = 0.1) -> StrategyAssignment:
    """Random partition with exactly ``round(gamma1 * N)`` order-pbest slots."""
    if not 0.0 <= gamma1 <= 1.0:
        raise ValueError(f"gamma1 must lie in [0, 1], got {gamma1}")
    g = clamp_gamma(gamma1, gamma_min)
    n1 = round_half_up(g * N)
    labels = np.full(N, PBEST, dtype=np.int8)
    labels[rng.permutation(N)[:n1]] = ORDER_PBEST
    return StrategyAssignment(labels, g)
