"""Binomial crossover with Cauchy perturbation, bound repair and selection."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

PERTURB_SCALE = 0.1


def perturbation_scale(lower, upper, mode: str = "absolute"):
    if mode == "absolute":
        return PERTURB_SCALE
    if mode == "range_relative":
        # 0.1 in coordinates normalized to [0, 1]
        return PERTURB_SCALE * (np.asarray(upper, float) - np.asarray(lower, float))
    raise ValueError(f"unknown perturb_scale_mode {mode!r}")


def crossover_perturb(parent, trial_v, Cr, p_r: float, rng: np.random.Generator,
                      scale=PERTURB_SCALE):
    """Build offspring coordinates from mutant, perturbed parent, or parent.

    For each coordinate: the mutant value if it is the forced index or a
    uniform draw is below ``Cr``; otherwise a Cauchy draw around the parent
    value with probability ``p_r``; otherwise the parent value.

    Accepts a single parent vector or rows of parents (``Cr`` then has one
    entry per row). Draw order: forced index, crossover uniforms,
    perturbation uniforms, Cauchy deviates. All four blocks are drawn in
    full so the stream does not depend on which branch fires.
    """
    parent = np.asarray(parent, dtype=float)
    single = parent.ndim == 1
    X = np.atleast_2d(parent)
    V = np.atleast_2d(np.asarray(trial_v, dtype=float))
    n, D = X.shape
    Cr = np.broadcast_to(np.asarray(Cr, dtype=float), (n,))[:, None]

    j_rand = rng.integers(D, size=n)
    take_v = rng.random((n, D)) < Cr
    take_v[np.arange(n), j_rand] = True
    perturb = (rng.random((n, D)) < p_r) & ~take_v
    noise = rng.standard_cauchy((n, D))

    U = np.where(take_v, V, X)
    U = np.where(perturb, X + scale * noise, U)
    return U[0] if single else U


def repair_bounds(u, parent, lower, upper):
    """Put violated coordinates halfway between the bound and the parent."""
    u = np.asarray(u, dtype=float)
    parent = np.asarray(parent, dtype=float)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    out = np.where(u < lower, (lower + parent) / 2.0, u)
    return np.where(out > upper, (upper + parent) / 2.0, out)


class Selection(NamedTuple):
    offspring_survives: np.ndarray | bool
    success: np.ndarray | bool
    improvement: np.ndarray | float


def select_survivor(f_parent, f_offspring) -> Selection:
    """Offspring replaces the parent on ``<=``; only strict gains count as success."""
    fp = np.asarray(f_parent, dtype=float)
    fo = np.asarray(f_offspring, dtype=float)
    survives = fo <= fp
    success = fo < fp
    gain = np.where(success, fp - fo, 0.0)
    if fp.ndim == 0 and fo.ndim == 0:
        return Selection(bool(survives), bool(success), float(gain))
    return Selection(survives, success, gain)
