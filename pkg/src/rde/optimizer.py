"""The RDE driver loop and its run configuration.

One generation, in order:

1. per trial: p, (F, Cr), operator label, (pbest, r1, r2), mutant,
   crossover with perturbation, bound repair
2. evaluation of all trials (truncated when the budget runs out)
3. selection, archive insertion of strictly beaten parents
4. memory update, operator-share update, population and archive shrink

Trials are produced from the population as it stood at the start of the
generation, so each generation is computed as a batch.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from . import adaptation as ad
from .core import (
    Candidate,
    ConfigurationError,
    ExternalArchive,
    archive_extend,
    init_population,
    make_rng,
    round_half_up,
)
from .mutation import ORDER_PBEST, PBEST, assign_strategies, mutate_ord_pbest, mutate_pbest
from .pressure import sample_triples
from .variation import crossover_perturb, perturbation_scale, repair_bounds, select_survivor

ERROR_FLOOR = 1e-8
TRACE_POINTS = 16

FLAGS = (
    "enable_ord_pbest",
    "enable_rsp",
    "rsp_scope",
    "enable_cauchy_perturb",
    "enable_lpsr",
    "memory_index",
    "gamma_clamp",
    "perturb_scale_mode",
    "p_update",
)
# Turning these off leaves an LSHADE-style optimizer (LPSR and memory kept).
RDE_SPECIFIC = {"enable_ord_pbest": False, "enable_rsp": False, "enable_cauchy_perturb": False}

_CHOICES = {
    "rsp_scope": ("all", "r1r2"),
    "memory_index": ("cyclic", "random"),
    "perturb_scale_mode": ("absolute", "range_relative"),
    "p_update": ("per_individual", "per_generation"),
}


@dataclass(frozen=True)
class RunConfig:
    D: int
    max_nfes: int | None = None
    N_max: int | None = None
    N_min: int = 4
    H: int = 5
    p_max: float = 0.25
    Ar: float = 1.0
    mu_F_init: float = 0.3
    mu_Cr_init: float = 0.8
    gamma_init: float = 0.5
    k_r: float = 3.0
    p_r: float = 0.2
    seed: int = 0
    enable_ord_pbest: bool = True
    enable_rsp: bool = True
    rsp_scope: str = "all"
    enable_cauchy_perturb: bool = True
    enable_lpsr: bool = True
    memory_index: str = "cyclic"
    gamma_clamp: float = 0.1
    perturb_scale_mode: str = "absolute"
    p_update: str = "per_individual"

    def __post_init__(self):
        if self.D < 1:
            raise ConfigurationError("D must be >= 1")
        if self.max_nfes is None:
            object.__setattr__(self, "max_nfes", 10000 * self.D)
        if self.N_max is None:
            object.__setattr__(self, "N_max", 18 * self.D)
        self.validate()

    def validate(self) -> None:
        if self.N_min < 4:
            raise ConfigurationError("N_min must be >= 4")
        if self.N_max < self.N_min:
            raise ConfigurationError("N_max must be >= N_min")
        if self.max_nfes <= self.N_max:
            raise ConfigurationError(
                f"budget {self.max_nfes} does not exceed the initial population {self.N_max}")
        if self.H < 1:
            raise ConfigurationError("H must be >= 1")
        if not 0 < self.p_max <= 1:
            raise ConfigurationError("p_max must lie in (0, 1]")
        if self.Ar < 0 or self.k_r < 0:
            raise ConfigurationError("Ar and k_r must be non-negative")
        if not 0 <= self.p_r <= 1 or not 0 <= self.gamma_init <= 1:
            raise ConfigurationError("p_r and gamma_init must lie in [0, 1]")
        if not 0 <= self.gamma_clamp < 0.5:
            raise ConfigurationError("gamma_clamp must lie in [0, 0.5)")
        for key, allowed in _CHOICES.items():
            if getattr(self, key) not in allowed:
                raise ConfigurationError(f"{key} must be one of {allowed}")

    @property
    def effective_k_r(self) -> float:
        return self.k_r if self.enable_rsp else 0.0


def ablate(config: RunConfig, overrides: dict | None = None) -> RunConfig:
    """Copy of ``config`` with named fields replaced; unknown names are rejected."""
    if not overrides:
        return config
    known = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = sorted(set(overrides) - known)
    if unknown:
        raise ConfigurationError(f"unknown flag(s): {', '.join(unknown)}")
    return dataclasses.replace(config, **overrides)


def lshade_like(config: RunConfig) -> RunConfig:
    return ablate(config, dict(RDE_SPECIFIC, rsp_scope="r1r2"))


@dataclass
class RunResult:
    best: Candidate
    error: float
    nfes_used: int
    trace: list = field(default_factory=list)
    generations: int = 0


def fitness_error(f_best: float, f_opt: float) -> float:
    err = f_best - f_opt
    return 0.0 if err < ERROR_FLOOR else float(err)


class Trace:
    """Best error recorded the first time nfes reaches each checkpoint."""

    def __init__(self, start: int, max_nfes: int, points: int = TRACE_POINTS):
        cps = np.unique(np.round(np.geomspace(start, max_nfes, points)).astype(int))
        self.checkpoints = [int(c) for c in cps]
        self.entries: list[tuple[int, float]] = []

    def update(self, nfes: int, error: float) -> None:
        while len(self.entries) < len(self.checkpoints) and nfes >= self.checkpoints[len(self.entries)]:
            self.entries.append((self.checkpoints[len(self.entries)], error))


def run(problem, config: RunConfig) -> RunResult:
    """Minimize ``problem`` with RDE under ``config``; deterministic for a fixed seed."""
    if problem.D != config.D:
        raise ConfigurationError(f"problem has D={problem.D}, config has D={config.D}")
    rng = make_rng(config.seed)
    D = config.D
    max_nfes = config.max_nfes
    lower, upper = problem.lower, problem.upper
    f_opt = getattr(problem, "f_opt", 0.0)
    k_r = config.effective_k_r
    scale = perturbation_scale(lower, upper, config.perturb_scale_mode)
    p_r = config.p_r if config.enable_cauchy_perturb else 0.0
    gamma_min = config.gamma_clamp

    pop = init_population(problem, config.N_max, rng)
    nfes = config.N_max
    archive = ExternalArchive(D, round_half_up(config.Ar * config.N_max))
    memory = ad.ParameterMemory.initial(config.H, config.mu_F_init, config.mu_Cr_init)
    gamma = ad.GammaState(config.gamma_init if config.enable_ord_pbest else 0.0)
    trace = Trace(nfes, max_nfes)
    trace.update(nfes, fitness_error(pop.f[0], f_opt))

    k = 0
    while nfes < max_nfes:
        k += 1
        N = pop.size
        n = min(N, max_nfes - nfes)
        rows = np.arange(n)
        nfes_i = nfes + rows

        if config.p_update == "per_individual":
            p = ad.p_schedule(config.p_max, nfes_i, max_nfes)
        else:
            p = ad.p_schedule(config.p_max, nfes, max_nfes)
        F, Cr = ad.sample_F_Cr(memory, k, nfes_i, max_nfes, rng, size=n,
                               memory_index=config.memory_index)
        if config.enable_ord_pbest:
            labels = assign_strategies(N, gamma.gamma1, rng, gamma_min).labels[:n]
        else:
            labels = np.full(n, PBEST, dtype=np.int8)
        pb, r1, r2 = sample_triples(pop.f, archive.f, rows, p, k_r, rng, config.rsp_scope)

        X = pop.X[:n]
        union_X = np.concatenate([pop.X, archive.X]) if archive.size else pop.X
        union_f = np.concatenate([pop.f, archive.f]) if archive.size else pop.f
        Fc = F[:, None]
        V = mutate_pbest(X, Fc, pop.X[pb], pop.X[r1], union_X[r2])
        use_ord = labels == ORDER_PBEST
        if use_ord.any():
            o = use_ord
            V[o] = mutate_ord_pbest(X[o], Fc[o], pop.X[pb[o]], pop.X[r1[o]], union_X[r2[o]],
                                    pop.f[pb[o]], pop.f[r1[o]], union_f[r2[o]])

        U = crossover_perturb(X, V, Cr, p_r, rng, scale)
        U = repair_bounds(U, X, lower, upper)
        fu = problem.evaluate_batch(U)
        nfes += n

        sel = select_survivor(pop.f[:n], fu)
        won = sel.success
        archive_extend(archive, X[won], pop.f[:n][won], rng)
        keep = sel.offspring_survives
        pop.X[:n][keep] = U[keep]
        pop.f[:n][keep] = fu[keep]

        succ = sel.success
        records = ad.SuccessRecords(F[succ], Cr[succ], sel.improvement[succ])
        memory = ad.update_memory(memory, records, k)
        if config.enable_ord_pbest:
            gamma = ad.update_gamma(gamma, sel.improvement[use_ord], sel.improvement[~use_ord],
                                    gamma_min)

        pop.sort()
        pop.generation = k + 1
        if config.enable_lpsr:
            N_next = ad.population_schedule(config.N_max, config.N_min, nfes, max_nfes)
            if N_next < pop.size:
                pop.truncate(N_next)
        archive.resize(round_half_up(config.Ar * pop.size), rng)
        trace.update(nfes, fitness_error(pop.f[0], f_opt))

    best = pop.best
    return RunResult(best, fitness_error(best.fitness, f_opt), nfes, trace.entries, k)
