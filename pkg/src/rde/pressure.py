"""Rank-based selective pressure (RSP) and distinct index sampling.

Members are addressed by rank position: index 0 is the best. Weights are
linear in rank, ``k_r * (M - rank) + 1`` for rank 1..M, so ``k_r = 0``
gives uniform selection.

Indices returned for the second difference term address the union of the
population (first ``N`` positions) and the archive (positions ``N..``).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import ceil

import numpy as np

MAX_RESAMPLES = 100


class EmptySelectionError(ValueError):
    pass


class SamplingError(RuntimeError):
    """Distinct indices could not be found (population too small)."""


@dataclass(frozen=True)
class RankWeights:
    weights: np.ndarray
    probs: np.ndarray
    k_r: float
    cdf: np.ndarray


def rank_weights(M: int, k_r: float) -> RankWeights:
    if M < 1:
        raise EmptySelectionError("cannot rank an empty selection")
    if k_r < 0:
        raise ValueError("k_r must be non-negative")
    return _rank_weights(int(M), float(k_r))


@lru_cache(maxsize=4096)
def _rank_weights(M: int, k_r: float) -> RankWeights:
    ranks = np.arange(1, M + 1, dtype=float)
    w = k_r * (M - ranks) + 1.0
    probs = w / w.sum()
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    for a in (w, probs, cdf):
        a.setflags(write=False)
    return RankWeights(w, probs, k_r, cdf)


def elite_size(p: float, N: int) -> int:
    """Size of the pbest pool: ``ceil(p * N)`` with a floor of two."""
    return min(N, max(2, ceil(p * N)))


def draw_ranked(rw: RankWeights, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw rank positions (0-based) with RSP probabilities."""
    u = rng.random(size)
    return np.minimum(np.searchsorted(rw.cdf, u, side="right"), rw.weights.size - 1)


def joint_order(pop_f: np.ndarray, arch_f: np.ndarray) -> np.ndarray:
    """Union positions sorted jointly by fitness; population wins ties."""
    return np.argsort(np.concatenate([pop_f, arch_f]), kind="stable")


def _fallback(rw: RankWeights, forbidden: list[int], rng: np.random.Generator,
              order: np.ndarray | None = None) -> int:
    # Zero out already-used positions and draw from what remains.
    M = rw.weights.size
    w = rw.weights.copy()
    labels = np.arange(M) if order is None else order
    mask = np.isin(labels, forbidden)
    w[mask] = 0.0
    if w.sum() <= 0:
        raise SamplingError("no distinct index left to draw")
    pos = rng.choice(M, p=w / w.sum())
    return int(labels[pos])


def _draw_distinct(draw, forbid_rows, rng, fallback):
    """Rejection-sample ``draw(n_rows)`` until no row hits its forbidden set."""
    out = draw(None)
    bad = forbid_rows(out)
    tries = 0
    while bad.any() and tries < MAX_RESAMPLES:
        rows = np.flatnonzero(bad)
        out[rows] = draw(rows)
        bad = forbid_rows(out)
        tries += 1
    for r in np.flatnonzero(bad):
        out[r] = fallback(r, out)
    return out


def sample_triples(
    pop_f: np.ndarray,
    arch_f: np.ndarray,
    rows: np.ndarray,
    p: np.ndarray | float,
    k_r: float,
    rng: np.random.Generator,
    rsp_scope: str = "all",
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sample ``(pbest, r1, r2)`` for each target row in ``rows``.

    ``pbest`` comes from the top ``elite_size(p, N)`` ranks, re-weighted over
    that subset; ``r1`` from the population; ``r2`` from population and archive
    ranked jointly. All three differ from each other and from the target.
    With ``rsp_scope="r1r2"`` the pbest draw is uniform over the elite.
    """
    N = pop_f.shape[0]
    if N < 4:
        raise SamplingError(f"need at least 4 members, got {N}")
    rows = np.asarray(rows)
    n = rows.shape[0]
    p_arr = np.broadcast_to(np.asarray(p, dtype=float), (n,))
    k_best = k_r if rsp_scope == "all" else 0.0

    # pbest: pool size can differ per row when p is updated per individual
    elite = np.minimum(N, np.maximum(2, np.ceil(p_arr * N))).astype(np.intp)
    pools = {int(m): rank_weights(int(m), k_best) for m in np.unique(elite)}

    def draw_best(sel):
        idx = np.arange(n) if sel is None else sel
        res = np.empty(idx.shape[0], dtype=np.intp)
        u = rng.random(idx.shape[0])
        for m, rw in pools.items():
            hit = elite[idx] == m
            res[hit] = np.minimum(np.searchsorted(rw.cdf, u[hit], side="right"), m - 1)
        return res

    pbest = _draw_distinct(
        draw_best,
        lambda out: out == rows,
        rng,
        lambda r, out: _fallback(pools[int(elite[r])], [rows[r]], rng),
    )

    rw_pop = rank_weights(N, k_r)
    r1 = _draw_distinct(
        lambda sel: draw_ranked(rw_pop, n if sel is None else sel.shape[0], rng),
        lambda out: (out == rows) | (out == pbest),
        rng,
        lambda r, out: _fallback(rw_pop, [rows[r], pbest[r]], rng),
    )

    order = joint_order(pop_f, arch_f)
    rw_all = rank_weights(order.shape[0], k_r)
    r2 = _draw_distinct(
        lambda sel: order[draw_ranked(rw_all, n if sel is None else sel.shape[0], rng)],
        lambda out: (out == rows) | (out == pbest) | (out == r1),
        rng,
        lambda r, out: _fallback(rw_all, [rows[r], pbest[r], r1[r]], rng, order),
    )
    return pbest, r1, r2


def sample_distinct_rsp(
    pop_f: np.ndarray,
    arch_f: np.ndarray,
    i: int,
    p: float,
    k_r: float,
    rng: np.random.Generator,
    rsp_scope: str = "all",
) -> tuple[int, int, int]:
    """Single-target version of :func:`sample_triples`."""
    pb, r1, r2 = sample_triples(pop_f, arch_f, np.array([i]), p, k_r, rng, rsp_scope)
    return int(pb[0]), int(r1[0]), int(r2[0])
