"""Parameter adaptation and schedules.

Covers the success-history memory for F and Cr (with a frozen last slot),
the early-stage limits on F and Cr, the adaptive split between the two
mutation operators, and the linear schedules for p and the population size.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .mutation import clamp_gamma

TERMINAL_VALUE = 0.9
SCALE_F = 0.1
SCALE_CR = 0.1


@dataclass
class ParameterMemory:
    mu_F: np.ndarray
    mu_Cr: np.ndarray

    @classmethod
    def initial(cls, H: int, mu_F: float = 0.3, mu_Cr: float = 0.8) -> "ParameterMemory":
        if H < 1:
            raise ValueError("memory size must be >= 1")
        F = np.full(H, float(mu_F))
        Cr = np.full(H, float(mu_Cr))
        F[-1] = Cr[-1] = TERMINAL_VALUE
        return cls(F, Cr)

    @property
    def H(self) -> int:
        return self.mu_F.shape[0]

    def copy(self) -> "ParameterMemory":
        return ParameterMemory(self.mu_F.copy(), self.mu_Cr.copy())


@dataclass
class SuccessRecords:
    s_F: list = field(default_factory=list)
    s_Cr: list = field(default_factory=list)
    improvements: list = field(default_factory=list)

    def __post_init__(self):
        if not len(self.s_F) == len(self.s_Cr) == len(self.improvements):
            raise ValueError("success records must have equal lengths")

    def __len__(self):
        return len(self.improvements)


@dataclass
class GammaState:
    gamma1: float = 0.5
    omega_m1: float = 0.0
    omega_m2: float = 0.0
    n1: int = 0
    n2: int = 0

    @property
    def gamma2(self) -> float:
        return 1.0 - self.gamma1


def memory_slot(k: int, H: int) -> int:
    """0-based slot used in generation ``k`` (k starts at 1)."""
    return (k - 1) % H


def apply_stage_constraints(F, Cr, nfes, max_nfes):
    """Cap F at 0.7 before 60% of the budget; floor Cr at 0.7 / 0.6 before 25% / 50%."""
    F = np.asarray(F, dtype=float)
    Cr = np.asarray(Cr, dtype=float)
    frac = np.asarray(nfes, dtype=float) / max_nfes
    F = np.where((frac < 0.6) & (F > 0.7), 0.7, F)
    early = frac < 0.25
    mid = ~early & (frac < 0.5)
    Cr = np.where(early & (Cr < 0.7), 0.7, Cr)
    Cr = np.where(mid & (Cr < 0.6), 0.6, Cr)
    return F, Cr


def sample_F_Cr(memory: ParameterMemory, k: int, nfes, max_nfes: int,
                rng: np.random.Generator, size: int | None = None,
                memory_index: str = "cyclic"):
    """Draw (F, Cr) for one or ``size`` individuals.

    ``nfes`` may be an array with the evaluation count at which each
    individual is evaluated, so stage limits switch mid-generation.
    Draw order: slot indices (random mode only), F, F resamples, Cr.
    """
    n = 1 if size is None else size
    if memory_index == "cyclic":
        h = np.full(n, memory_slot(k, memory.H))
    elif memory_index == "random":
        h = rng.integers(memory.H, size=n)
    else:
        raise ValueError(f"unknown memory_index {memory_index!r}")
    loc_F = memory.mu_F[h]
    F = loc_F + SCALE_F * rng.standard_cauchy(n)
    bad = F <= 0
    while bad.any():
        F[bad] = loc_F[bad] + SCALE_F * rng.standard_cauchy(int(bad.sum()))
        bad = F <= 0
    F = np.minimum(F, 1.0)
    Cr = np.clip(rng.normal(memory.mu_Cr[h], SCALE_CR), 0.0, 1.0)
    F, Cr = apply_stage_constraints(F, Cr, np.broadcast_to(nfes, (n,)), max_nfes)
    if size is None:
        return float(F[0]), float(Cr[0])
    return F, Cr


def weighted_lehmer_mean(s, w) -> float:
    s = np.asarray(s, dtype=float)
    w = np.asarray(w, dtype=float)
    den = np.sum(w * s)
    if den == 0:
        return 0.0
    return float(np.sum(w * s * s) / den)


def update_memory(memory: ParameterMemory, records: SuccessRecords, k: int) -> ParameterMemory:
    """Write weighted Lehmer means of the successful F and Cr into slot of generation k.

    Weights are the fitness improvements, normalized. The last slot is never
    written.
    """
    h = memory_slot(k, memory.H)
    if len(records) == 0 or h == memory.H - 1:
        return memory
    imp = np.asarray(records.improvements, dtype=float)
    w = imp / imp.sum()
    out = memory.copy()
    out.mu_F[h] = weighted_lehmer_mean(records.s_F, w)
    out.mu_Cr[h] = weighted_lehmer_mean(records.s_Cr, w)
    return out


def update_gamma(state: GammaState, improvements_1, improvements_2,
                 gamma_min: float = 0.1) -> GammaState:
    """Share of the population for the order-pbest operator next generation.

    Each argument lists the fitness improvement of every trial produced by
    that operator (0 for failed trials).
    """
    imp1 = np.asarray(improvements_1, dtype=float)
    imp2 = np.asarray(improvements_2, dtype=float)
    w1 = float(imp1.mean()) if imp1.size else 0.0
    w2 = float(imp2.mean()) if imp2.size else 0.0
    if w1 == 0.0 and w2 == 0.0:
        g = 0.5
    else:
        g = w1 / (w1 + w2)
    return GammaState(clamp_gamma(g, gamma_min), w1, w2, int(imp1.size), int(imp2.size))


def p_schedule(p_max: float, nfes, max_nfes: int):
    """p shrinks linearly from ``p_max`` to ``p_max / 2`` over the budget."""
    p = p_max * (1.0 - 0.5 * np.asarray(nfes, dtype=float) / max_nfes)
    return float(p) if p.ndim == 0 else p


def population_schedule(N_max: int, N_min: int, nfes: int, max_nfes: int) -> int:
    """Linear reduction from ``N_max`` to ``N_min``, rounded half up.

    Integer arithmetic only, so interior values are exact.
    """
    if N_min < 4:
        raise ValueError("N_min must be >= 4")
    nfes = min(max(int(nfes), 0), max_nfes)
    num = (N_min - N_max) * nfes + N_max * max_nfes
    return max(N_min, (2 * num + max_nfes) // (2 * max_nfes))
