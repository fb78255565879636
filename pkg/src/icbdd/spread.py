"""Probability queries on compiled connectivity diagrams.

Every query is a dynamic program over a diagram in the shared store:
backward probabilities give spreads, forward probabilities combined with
backward ones give derivatives, and a backward-weighted walk samples
realizations without rejection.  A level skipped along a path contributes a
factor ``p + (1 - p) = 1``, so no gap correction is needed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .bdd import FALSE, TRUE, NodeStore
from .frontier import ConnectivityForest


class ImpossibleEvidence(ValueError):
    """Conditioning evidence has probability zero (or contradicts itself)."""


@dataclass
class ProbTables:
    backward: dict[int, float]
    forward: dict[int, float] = field(default_factory=dict)


@dataclass
class SpreadResult:
    seeds: tuple[int, ...]
    sigma: float
    per_target: dict[int, float]

    def to_json(self, labels: Sequence[str]) -> dict:
        return {
            "seeds": [labels[s] for s in self.seeds],
            "per_target": {labels[t]: p for t, p in self.per_target.items()},
            "sigma": self.sigma,
        }


def _check_probs(prob_by_level: Sequence[float]) -> None:
    for p in prob_by_level:
        if not (0.0 <= p <= 1.0):
            raise ValueError(f"probability out of range: {p}")


def backward(store: NodeStore, root: int, prob: Sequence[float],
             memo: dict[int, float] | None = None) -> dict[int, float]:
    """Backward probability of every node under ``root``.

    ``prob`` is indexed by level.  Passing a ``memo`` shared across roots of
    the same store (with the same probabilities) reuses earlier work.
    """
    B = memo if memo is not None else {}
    B[FALSE] = 0.0
    B[TRUE] = 1.0
    if root in B:
        return B
    level, lo, hi = store.level, store.lo, store.hi
    todo = [f for f in store.nodes_below([root]) if f not in B]
    todo.sort(key=level.__getitem__, reverse=True)
    for f in todo:
        p = prob[level[f]]
        B[f] = (1.0 - p) * B[lo[f]] + p * B[hi[f]]
    return B


def forward(store: NodeStore, root: int, prob: Sequence[float]) -> dict[int, float]:
    """Forward probability: mass of root-to-node paths, ``F(root) = 1``."""
    F = {root: 1.0}
    level, lo, hi = store.level, store.lo, store.hi
    for f in store.topological(root):
        mass = F.get(f, 0.0)
        if not mass:
            continue
        p = prob[level[f]]
        F[lo[f]] = F.get(lo[f], 0.0) + (1.0 - p) * mass
        F[hi[f]] = F.get(hi[f], 0.0) + p * mass
    return F


def prob_tables(store: NodeStore, root: int, prob: Sequence[float]) -> ProbTables:
    return ProbTables(backward(store, root, prob), forward(store, root, prob))


def gradient(store: NodeStore, root: int, prob: Sequence[float],
             tables: ProbTables | None = None) -> dict[int, float]:
    """d p(family) / d p(level) for every level tested under ``root``.

    Each node on level ``L`` contributes ``F(node) * (B(hi) - B(lo))``;
    levels never tested have derivative 0 and are omitted.
    """
    if tables is None:
        tables = prob_tables(store, root, prob)
    B, F = tables.backward, tables.forward
    grad: dict[int, float] = {}
    for f, mass in F.items():
        if f <= TRUE:
            continue
        lv = store.level[f]
        grad[lv] = grad.get(lv, 0.0) + mass * (B[store.hi[f]] - B[store.lo[f]])
    return grad


def sample_realization(store: NodeStore, root: int, prob: Sequence[float],
                       rng: np.random.Generator, B: dict[int, float] | None = None) -> set[int]:
    """Draw the set of true levels from the family under ``root``, weighted by p(F).

    Levels the walk does not test (above the root, in gaps, below the
    1-terminal) are drawn independently with their own probability.
    """
    if root == FALSE:
        raise ValueError("cannot sample from an empty family")
    if B is None:
        B = backward(store, root, prob)
    if B[root] <= 0.0:
        raise ValueError("cannot sample: family has probability zero")
    m = store.num_vars
    draws = rng.random(m + 1)
    chosen = set()
    f = root
    for lv in range(1, m + 1):
        p = prob[lv]
        if f > TRUE and store.level[f] == lv:
            w1 = p * B[store.hi[f]]
            take = draws[lv] * B[f] < w1
            f = store.hi[f] if take else store.lo[f]
        else:
            take = draws[lv] < p
        if take:
            chosen.add(lv)
    assert f == TRUE
    return chosen


# -- graph-level queries ----------------------------------------------------------


class Evaluator:
    """Backward DP over a forest with a fixed probability vector, memoized across roots."""

    def __init__(self, forest: ConnectivityForest, probs: Sequence[float] | None = None):
        self.forest = forest
        self.prob = forest.prob_by_level(probs)
        _check_probs(self.prob)
        self.memo: dict[int, float] = {}

    def value(self, ref: int) -> float:
        return backward(self.forest.store, ref, self.prob, self.memo)[ref]


def _seed_tuple(forest: ConnectivityForest, seeds: Iterable[int]) -> tuple[int, ...]:
    seeds = tuple(sorted(set(seeds)))
    if not seeds:
        raise ValueError("seed set is empty")
    for s in seeds:
        if not (0 <= s < forest.graph.n):
            raise KeyError(f"unknown vertex id {s}")
    return seeds


def influence_spread(forest: ConnectivityForest, seeds: Iterable[int],
                     probs: Sequence[float] | None = None,
                     evaluator: Evaluator | None = None) -> SpreadResult:
    """Expected number of vertices activated from ``seeds``."""
    seeds = _seed_tuple(forest, seeds)
    ev = evaluator if evaluator is not None else Evaluator(forest, probs)
    per_target = {t: ev.value(forest.multi(seeds, t)) for t in range(forest.graph.n)}
    return SpreadResult(seeds, sum(per_target.values()), per_target)


def update_probabilities(forest: ConnectivityForest, seeds: Iterable[int],
                         probs: Sequence[float]) -> SpreadResult:
    """Spread under new probabilities; reuses every compiled diagram."""
    for p in probs:
        if not (0.0 <= p <= 1.0):
            raise ValueError(f"probability out of range: {p}")
    return influence_spread(forest, seeds, probs)


def spread_gradient(forest: ConnectivityForest, seeds: Iterable[int],
                    probs: Sequence[float] | None = None,
                    target: int | None = None) -> list[float]:
    """d sigma / d p(e) for every edge id (of one target's probability if given)."""
    seeds = _seed_tuple(forest, seeds)
    prob = forest.prob_by_level(probs)
    _check_probs(prob)
    store = forest.store
    targets = range(forest.graph.n) if target is None else [target]
    memo: dict[int, float] = {}
    grad = [0.0] * forest.graph.m
    perm = forest.order.perm
    for t in targets:
        root = forest.multi(seeds, t)
        tables = ProbTables(backward(store, root, prob, memo), forward(store, root, prob))
        for lv, d in gradient(store, root, prob, tables).items():
            grad[perm[lv - 1]] += d
    return grad


def evidence_root(forest: ConnectivityForest, seeds: tuple[int, ...],
                  positives: Iterable[int], negatives: Iterable[int]) -> int:
    positives, negatives = set(positives), set(negatives)
    if positives & negatives:
        raise ImpossibleEvidence("a vertex cannot be both influenced and not influenced")
    if negatives & set(seeds):
        raise ImpossibleEvidence("a seed cannot be observed as not influenced")
    store = forest.store
    acc = TRUE
    for u in sorted(positives):
        acc = store.apply_and(acc, forest.multi(seeds, u))
    for w in sorted(negatives):
        acc = store.apply_and(acc, store.negate(forest.multi(seeds, w)))
    return acc


def conditional_spread(forest: ConnectivityForest, seeds: Iterable[int],
                       positives: Iterable[int] = (), negatives: Iterable[int] = (),
                       probs: Sequence[float] | None = None) -> SpreadResult:
    """Spread conditioned on observed influenced / non-influenced vertices."""
    seeds = _seed_tuple(forest, seeds)
    positives, negatives = set(positives), set(negatives)
    evidence = evidence_root(forest, seeds, positives, negatives)
    ev = Evaluator(forest, probs)
    p_evidence = ev.value(evidence)
    if p_evidence <= 0.0:
        raise ImpossibleEvidence("observed evidence has probability zero")
    store = forest.store
    per_target = {}
    for t in range(forest.graph.n):
        if t in positives:
            per_target[t] = 1.0
        elif t in negatives:
            per_target[t] = 0.0
        else:
            joint = store.apply_and(forest.multi(seeds, t), evidence)
            per_target[t] = min(1.0, ev.value(joint) / p_evidence)
    return SpreadResult(seeds, sum(per_target.values()), per_target)


def sample_edges(forest: ConnectivityForest, seeds: Iterable[int], target: int, count: int,
                 rng: np.random.Generator, probs: Sequence[float] | None = None,
                 evidence: int = TRUE) -> list[set[int]]:
    """``count`` realizations (edge-id sets) in which ``target`` is reached from ``seeds``.

    ``evidence`` optionally intersects the family with an evidence root.
    """
    seeds = _seed_tuple(forest, seeds)
    store = forest.store
    root = store.apply_and(forest.multi(seeds, target), evidence)
    prob = forest.prob_by_level(probs)
    _check_probs(prob)
    B = backward(store, root, prob)
    return [forest.to_edges(sample_realization(store, root, prob, rng, B)) for _ in range(count)]
