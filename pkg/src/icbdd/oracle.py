"""Ground truth that shares no code with the diagram path.

Exhaustive enumeration over all edge subsets, and Monte-Carlo estimation over
sampled realizations.  Both use the edge-realization view of the cascade:
sample every edge independently, then count vertices reachable from the seeds.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Sequence

import numpy as np

from .graph import ProbGraph

MAX_SPREAD_EDGES = 25
MAX_FAMILY_EDGES = 20


class OracleTooLarge(ValueError):
    """Enumeration was requested on a graph above the size guard."""


def _guard(g: ProbGraph, limit: int) -> None:
    if g.m > limit:
        raise OracleTooLarge(f"{g.m} edges exceeds the enumeration guard of {limit}")


def _reach_mask(g: ProbGraph, sources: int, mask: int) -> int:
    """Vertex bitset reachable from ``sources`` using edges whose bit is set in ``mask``."""
    reach = sources
    changed = True
    while changed:
        changed = False
        for e in range(g.m):
            if mask >> e & 1 and reach >> g.tails[e] & 1 and not reach >> g.heads[e] & 1:
                reach |= 1 << g.heads[e]
                changed = True
    return reach


def _realization_prob(probs: Sequence[float], mask: int) -> float:
    out = 1.0
    for e, p in enumerate(probs):
        out *= p if mask >> e & 1 else 1.0 - p
    return out


def brute_spread(g: ProbGraph, seeds: Iterable[int],
                 probs: Sequence[float] | None = None) -> tuple[float, dict[int, float]]:
    """Exact spread and per-target activation probabilities by enumerating all 2^m subsets."""
    _guard(g, MAX_SPREAD_EDGES)
    probs = g.probs if probs is None else probs
    src = 0
    for s in seeds:
        src |= 1 << s
    per_target = [0.0] * g.n
    for mask in range(1 << g.m):
        w = _realization_prob(probs, mask)
        if w == 0.0:
            continue
        reach = _reach_mask(g, src, mask)
        for v in range(g.n):
            if reach >> v & 1:
                per_target[v] += w
    return sum(per_target), dict(enumerate(per_target))


def brute_gradient(g: ProbGraph, seeds: Iterable[int],
                   probs: Sequence[float] | None = None) -> list[float]:
    """Exact d sigma / d p(e), differentiating the multilinear enumeration polynomial."""
    _guard(g, MAX_SPREAD_EDGES)
    probs = g.probs if probs is None else probs
    src = 0
    for s in seeds:
        src |= 1 << s
    grad = [0.0] * g.m
    for mask in range(1 << g.m):
        size = bin(_reach_mask(g, src, mask)).count("1")
        for e in range(g.m):
            rest = 1.0
            for f, p in enumerate(probs):
                if f != e:
                    rest *= p if mask >> f & 1 else 1.0 - p
            grad[e] += size * rest * (1.0 if mask >> e & 1 else -1.0)
    return grad


def brute_family(g: ProbGraph, s: int, t: int) -> set[frozenset[int]]:
    """All edge subsets F such that t is reachable from s in G[F]."""
    _guard(g, MAX_FAMILY_EDGES)
    out = set()
    for mask in range(1 << g.m):
        if _reach_mask(g, 1 << s, mask) >> t & 1:
            out.add(frozenset(e for e in range(g.m) if mask >> e & 1))
    return out


def _simulate_batch(g: ProbGraph, seeds: list[int], size: int, seed_seq) -> tuple[float, float]:
    rng = np.random.default_rng(seed_seq)
    probs = np.asarray(g.probs, dtype=float)
    live = rng.random((size, g.m)) < probs
    active = np.zeros((size, g.n), dtype=bool)
    active[:, seeds] = True
    for _ in range(max(g.n - 1, 0)):
        before = active.sum()
        for e in range(g.m):
            u, v = g.tails[e], g.heads[e]
            active[:, v] |= active[:, u] & live[:, e]
        if active.sum() == before:
            break
    counts = active.sum(axis=1, dtype=np.int64).astype(float)
    return float(counts.sum()), float((counts * counts).sum())


def monte_carlo_spread(g: ProbGraph, seeds: Iterable[int], samples: int, seed: int = 0,
                       batch_size: int = 1 << 18, workers: int = 1) -> tuple[float, float]:
    """Sample-mean spread estimate and its standard error.

    Each fixed-size batch draws from its own child stream of ``seed``, so the
    result does not depend on ``workers``.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    seeds = sorted(set(seeds))
    n_batches = -(-samples // batch_size)
    children = np.random.SeedSequence(seed).spawn(n_batches)
    sizes = [min(batch_size, samples - i * batch_size) for i in range(n_batches)]
    jobs = list(zip(sizes, children))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda job: _simulate_batch(g, seeds, *job), jobs))
    else:
        parts = [_simulate_batch(g, seeds, *job) for job in jobs]
    total = sum(p[0] for p in parts)
    total_sq = sum(p[1] for p in parts)
    mean = total / samples
    if samples == 1:
        return mean, float("nan")
    var = max(total_sq - samples * mean * mean, 0.0) / (samples - 1)
    return mean, math.sqrt(var / samples)
