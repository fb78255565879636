"""Global edge orderings with small frontiers.

All diagrams built for one graph share a single edge order, so Boolean
operations between them are well defined.  Level ``i`` (1-based) of every
diagram tests edge ``perm[i - 1]``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .graph import ProbGraph


@dataclass(frozen=True)
class EdgeOrder:
    perm: tuple[int, ...]
    frontiers: tuple[frozenset, ...]   # frontiers[i - 1] is W_i
    enter: tuple[frozenset, ...]
    leave: tuple[frozenset, ...]
    width: int

    @property
    def m(self) -> int:
        return len(self.perm)

    def levels(self) -> list[int]:
        """Level of every edge id (inverse permutation, 1-based)."""
        lev = [0] * len(self.perm)
        for i, e in enumerate(self.perm, start=1):
            lev[e] = i
        return lev

    def frontier_sum(self) -> int:
        return sum(len(w) for w in self.frontiers)


def frontier_profile(g: ProbGraph, perm: Sequence[int]) -> EdgeOrder:
    perm = tuple(int(e) for e in perm)
    if sorted(perm) != list(range(g.m)):
        raise ValueError("perm is not a bijection on the edge ids")
    first: dict[int, int] = {}
    last: dict[int, int] = {}
    for i, e in enumerate(perm, start=1):
        for v in (g.tails[e], g.heads[e]):
            first.setdefault(v, i)
            last[v] = i
    m = len(perm)
    enter = [set() for _ in range(m)]
    leave = [set() for _ in range(m)]
    for v, i in first.items():
        enter[i - 1].add(v)
    for v, i in last.items():
        leave[i - 1].add(v)
    frontiers = []
    live: set[int] = set()
    for i in range(m):
        live |= enter[i]
        live -= leave[i]
        frontiers.append(frozenset(live))
    width = max((len(w) for w in frontiers), default=0)
    return EdgeOrder(perm, tuple(frontiers), tuple(map(frozenset, enter)),
                     tuple(map(frozenset, leave)), width)


def _edges_from_vertex_sequence(g: ProbGraph, seq: Sequence[int]) -> list[int]:
    pos = {v: i for i, v in enumerate(seq)}

    def key(e):
        a, b = pos[g.tails[e]], pos[g.heads[e]]
        return (min(a, b), max(a, b), e)

    return sorted(range(g.m), key=key)


def beam_search_order(g: ProbGraph, beam_width: int = 100, rng_seed: int = 0) -> EdgeOrder:
    """Heuristic small-width edge order via beam search over vertex sequences.

    Placing vertex ``v`` processes every edge between ``v`` and the unplaced
    vertices.  A partial sequence is scored by ``(peak, total)``: ``peak`` is
    an upper bound on the edge-frontier size during the latest vertex's turn
    and ``total`` the running sum of those bounds.  Finished sequences are
    then ranked by the exact frontier profile of the edge order they induce.
    The input edge order is kept as a fallback candidate, so the result is
    never wider than it.
    """
    if beam_width < 1:
        raise ValueError("beam_width must be positive")
    baseline = frontier_profile(g, range(g.m))
    if g.m == 0:
        return baseline

    nbr = [0] * g.n
    mult: dict[tuple[int, int], int] = {}
    for u, v in zip(g.tails, g.heads):
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u
        key = (min(u, v), max(u, v))
        mult[key] = mult.get(key, 0) + 1
    active = [v for v in range(g.n) if nbr[v]]
    by_degree = sorted(active, key=lambda v: (bin(nbr[v]).count("1"), v))
    starts = list(by_degree)
    if rng_seed:
        random.Random(rng_seed).shuffle(starts)

    def bits(mask):
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    # state: (peak, total, seq, placed_mask, frontier_mask)
    def extend(state, v):
        _, total, seq, placed, before = state
        placed |= 1 << v
        fresh = nbr[v] & ~placed
        after = 0
        for x in bits((before | fresh) & ~(1 << v)):
            if nbr[x] & ~placed & ~(1 << x):
                after |= 1 << x
        peak = (before | after) & ~(1 << v)
        turn_edges = 0
        for x in bits(fresh):
            k = mult[(min(v, x), max(v, x))]
            turn_edges += k
            if k > 1:
                peak |= 1 << x   # touched by the first of parallel edges
        if turn_edges > 1:
            peak |= 1 << v
        size = bin(peak).count("1")
        return (size, total + size, seq + (v,), placed, after)

    empty = (0, 0, (), 0, 0)
    beam = [extend(empty, v) for v in starts[:beam_width]]
    for depth in range(len(active) - 1):
        final = depth == len(active) - 2
        best: dict = {}
        for state in beam:
            placed = state[3]
            outer = 0
            for u in state[2]:
                outer |= nbr[u]
            outer &= ~placed
            if outer:
                cands = list(bits(outer))
            else:
                # next component: lowest-degree unplaced vertex
                cands = [next(v for v in by_degree if not placed >> v & 1)]
            for v in cands:
                child = extend(state, v)
                # the last step keeps distinct sequences for exact evaluation below
                key = child[2] if final else child[3]
                prev = best.get(key)
                if prev is None or child[:3] < prev[:3]:
                    best[key] = child
        beam = sorted(best.values(), key=lambda s: s[:3])[:beam_width]

    # rank finished sequences (and their reversals) by the exact edge frontier
    choice = None
    for state in beam:
        for seq in (state[2], state[2][::-1]):
            cand = frontier_profile(g, _edges_from_vertex_sequence(g, seq))
            score = (cand.width, cand.frontier_sum(), seq)
            if choice is None or score < choice[0]:
                choice = (score, cand)
    candidate = choice[1]
    if (baseline.width, baseline.frontier_sum()) < (candidate.width, candidate.frontier_sum()):
        return baseline
    return candidate


def save_order(order: EdgeOrder | Sequence[int], path) -> None:
    perm = getattr(order, "perm", order)
    with open(path, "w") as fh:
        fh.write(" ".join(str(e) for e in perm) + "\n")


def load_order(g: ProbGraph, path) -> EdgeOrder:
    with open(path) as fh:
        perm = [int(tok) for tok in fh.read().split()]
    return frontier_profile(g, perm)
