"""Frontier-based construction of s-t connectivity BDDs.

``build_single`` compiles R(s, t) = {F subset of E : t reachable from s in G[F]}
into a BDD over the global edge order.  The search state of a node is the full
reachability relation of G[F] restricted to the current frontier plus ``s``
and ``t`` (rows are int bitsets over global vertex ids); nodes are merged on a
projection of that relation, the configuration key, which keeps only rows of
frontier vertices not yet reached from ``s`` and columns of frontier vertices
that do not yet reach ``t``.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .bdd import DEFAULT_NODE_LIMIT, FALSE, TRUE, Bdd, NodeBudgetExceeded, NodeStore, RawDiagram
from .graph import ProbGraph, SuffixClosure, suffix_closures
from .ordering import EdgeOrder, beam_search_order

log = logging.getLogger(__name__)

PRUNE_MODES = ("simpath", "weak", "none")


@dataclass
class SearchStats:
    """Diagnostics of one frontier search."""
    layer_sizes: list[int] = field(default_factory=list)
    frontier_sizes: list[int] = field(default_factory=list)
    raw_nodes: int = 0
    kept_edges: int = 0


@dataclass
class Configuration:
    """Search state of one node between steps.

    ``vertices`` lists the tracked vertices (``s``, ``t``, then frontier
    vertices in entry order) and ``rows[k]`` is the bitset of tracked vertices
    reachable from ``vertices[k]`` on G[F].
    """
    s: int
    t: int
    vertices: list[int]
    rows: list[int]
    frontier: int = 0   # bitset of true frontier vertices

    def row_of(self, x: int) -> int:
        # untouched vertices reach only themselves
        if x not in self.vertices:
            return 1 << x
        return self.rows[self.vertices.index(x)]

    def key(self) -> tuple:
        return merge_key(self.rows, self.vertices, self.frontier, self.t)


def merge_key(rows: Sequence[int], vertices: Sequence[int], frontier: int, t: int) -> tuple:
    from_s = rows[0]
    bit_t = 1 << t
    row_mask = 1 << vertices[0]
    col_mask = bit_t
    for x, r in zip(vertices, rows):
        bit = 1 << x
        if frontier & bit:
            if not from_s & bit:
                row_mask |= bit
            if not r & bit_t:
                col_mask |= bit
    bits = tuple(r & col_mask for x, r in zip(vertices, rows) if row_mask >> x & 1)
    return (row_mask, col_mask, bits)


def is_one_terminal(cfg: Configuration, edge: tuple[int, int], x: int) -> bool:
    """Including ``edge`` completes an s-t path in G[F]."""
    if not x:
        return False
    u, v = edge
    return bool(cfg.row_of(cfg.s) >> u & 1) and bool(cfg.row_of(v) >> cfg.t & 1)


def is_zero_terminal(cfg: Configuration, step: int, closures: SuffixClosure) -> bool:
    """No s-t path in G[F + E^{>step}]: BFS over tracked vertices mixing both relations."""
    tmask = 0
    for x in cfg.vertices:
        tmask |= 1 << x
    cl = closures.rows(step)
    adj = [r | (cl[x] & tmask) for x, r in zip(cfg.vertices, cfg.rows)]
    return not _connects(cfg.vertices, adj, 1 << cfg.s, 1 << cfg.t)


def _connects(vertices, adj, start, goal) -> bool:
    reach, done = start, 0
    while True:
        if reach & goal:
            return True
        pending = reach & ~done
        if not pending:
            return False
        done |= pending
        for x, a in zip(vertices, adj):
            if pending >> x & 1:
                reach |= a


def create_node(cfg: Configuration, edge: tuple[int, int], x: int,
                leaving: Iterable[int] = (), frontier: int | None = None) -> Configuration:
    """Child configuration after deciding ``edge``; ``leaving`` vertices are dropped."""
    u, v = edge
    vertices = list(cfg.vertices)
    rows = list(cfg.rows)
    for w in (u, v):
        if w not in vertices:
            vertices.append(w)
            rows.append(1 << w)
    if x:
        bit_u = 1 << u
        rv = rows[vertices.index(v)]
        rows = [r | rv if r & bit_u else r for r in rows]
    drop = {w for w in leaving if w != cfg.s and w != cfg.t}
    clear = ~sum(1 << w for w in drop)
    keep = [k for k, w in enumerate(vertices) if w not in drop]
    return Configuration(cfg.s, cfg.t, [vertices[k] for k in keep], [rows[k] & clear for k in keep],
                         cfg.frontier if frontier is None else frontier)


def _first_last(g: ProbGraph, perm: Sequence[int], kept: Sequence[bool]):
    first: dict[int, int] = {}
    last: dict[int, int] = {}
    for i, e in enumerate(perm, start=1):
        if kept[e]:
            for w in (g.tails[e], g.heads[e]):
                first.setdefault(w, i)
                last[w] = i
    return first, last


def frontier_search(g: ProbGraph, order: EdgeOrder, closures: SuffixClosure, s: int, t: int,
                    kept: Sequence[bool] | None = None, node_limit: int = DEFAULT_NODE_LIMIT,
                    stats: SearchStats | None = None) -> RawDiagram | int:
    """Run the search and return the raw diagram (or a terminal ref)."""
    if s == t:
        raise ValueError("s == t is trivially connected; callers use the 1-terminal")
    if stats is None:
        stats = SearchStats()
    perm = order.perm
    if kept is None:
        kept = [True] * g.m
    if not closures.reaches(0, s, t):
        return FALSE
    steps = [i for i, e in enumerate(perm, start=1) if kept[e]]
    stats.kept_edges = len(steps)
    if not steps:
        return FALSE
    first, last = _first_last(g, perm, kept)
    bit_s, bit_t = 1 << s, 1 << t

    levels: list[int] = []
    lo: list[int] = []
    hi: list[int] = []

    # current layer: key -> (raw id, rows); rows aligned with `tracked`
    tracked = [s, t]
    levels.append(steps[0])
    lo.append(-1)
    hi.append(-1)
    layer = {None: (0, (bit_s, bit_t))}
    frontier = 0

    for pos, i in enumerate(steps):
        e = perm[i - 1]
        u, v = g.tails[e], g.heads[e]
        entering = [w for w in (u, v) if first[w] == i and w != s and w != t]
        if u == v:
            raise ValueError("self-loop in graph")
        during = tracked + entering
        init_rows = tuple(1 << w for w in entering)
        leaving = {w for w in (u, v) if last[w] == i}
        for w in (u, v):
            if first[w] == i:
                frontier |= 1 << w
        frontier &= ~sum(1 << w for w in leaving)
        dropped = {w for w in leaving if w != s and w != t}
        keep_idx = [k for k, w in enumerate(during) if w not in dropped]
        after = [during[k] for k in keep_idx]
        clear = ~sum(1 << w for w in dropped)
        iv = during.index(v)
        bit_u = 1 << u
        tmask = 0
        for w in after:
            tmask |= 1 << w
        cl = closures.rows(i)
        cadj = [cl[w] & tmask for w in after]
        next_level = steps[pos + 1] if pos + 1 < len(steps) else None

        new_layer: dict[tuple, tuple[int, tuple]] = {}

        def child(rows):
            key = merge_key(rows, after, frontier, t)
            hit = new_layer.get(key)
            if hit is not None:
                return hit[0] + 2
            if next_level is None:
                raise AssertionError("live search node after the last kept edge")
            rid = len(levels)
            if rid >= node_limit:
                raise NodeBudgetExceeded(f"frontier search exceeded node limit {node_limit}")
            levels.append(next_level)
            lo.append(-1)
            hi.append(-1)
            new_layer[key] = (rid, rows)
            return rid + 2

        for rid, state in layer.values():
            rows = list(state) + list(init_rows) if init_rows else list(state)
            # 0-branch: frontier bookkeeping only, then the cutset test
            rows0 = tuple(rows[k] & clear for k in keep_idx)
            adj = [r | c for r, c in zip(rows0, cadj)]
            lo[rid] = child(rows0) if _connects(after, adj, bit_s, bit_t) else FALSE
            # 1-branch
            rv = rows[iv]
            if rows[0] & bit_u and rv & bit_t:
                hi[rid] = TRUE
            else:
                rows1 = [r | rv if r & bit_u else r for r in rows]
                hi[rid] = child(tuple(rows1[k] & clear for k in keep_idx))

        stats.layer_sizes.append(len(new_layer))
        stats.frontier_sizes.append(bin(frontier).count("1"))
        layer = new_layer
        tracked = after

    stats.raw_nodes = len(levels)
    return RawDiagram(levels, lo, hi, 2)


# -- preprocessing -----------------------------------------------------------


def weak_prune(g: ProbGraph, s: int, t: int) -> list[bool]:
    """Keep ``(u, v)`` iff s reaches u and v reaches t, excluding edges into s or out of t."""
    fwd = _reach(g, s, forward=True)
    bwd = _reach(g, t, forward=False)
    return [fwd >> u & 1 == 1 and bwd >> v & 1 == 1 and v != s and u != t
            for u, v in zip(g.tails, g.heads)]


def _reach(g: ProbGraph, src: int, forward: bool) -> int:
    adj = [[] for _ in range(g.n)]
    for u, v in zip(g.tails, g.heads):
        if forward:
            adj[u].append(v)
        else:
            adj[v].append(u)
    seen = 1 << src
    stack = [src]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if not seen >> y & 1:
                seen |= 1 << y
                stack.append(y)
    return seen


# vertex codes in the simple-path search
_UNUSED, _SATURATED = 0, 1


def _start(b):   # start of an open fragment ending at b
    return 2 + 2 * b


def _end(a):     # end of an open fragment starting at a
    return 3 + 2 * a


def simple_path_edges(g: ProbGraph, order: EdgeOrder, s: int, t: int,
                      candidates: Sequence[bool] | None = None,
                      node_limit: int = DEFAULT_NODE_LIMIT) -> list[bool]:
    """Edges lying on at least one simple directed s-t path.

    Frontier-based enumeration of all simple paths (a directed variant of
    Knuth's Simpath) followed by support extraction: an edge is kept iff some
    live search node takes its 1-arc towards a live child or the accept state.
    """
    if candidates is None:
        candidates = weak_prune(g, s, t)
    kept_out = [False] * g.m
    perm = order.perm
    steps = [i for i, e in enumerate(perm, start=1) if candidates[e]]
    if not steps:
        return kept_out
    first, last = _first_last(g, perm, candidates)

    tracked = [s, t]
    layer = {(_UNUSED, _UNUSED): 0}
    # arcs[node] = (step, lo, hi); children: -1 reject, -2 accept, else node id
    arcs: list[list] = [[steps[0], -1, -1]]

    for pos, i in enumerate(steps):
        e = perm[i - 1]
        u, v = g.tails[e], g.heads[e]
        entering = [w for w in (u, v) if first[w] == i and w != s and w != t]
        during = tracked + entering
        index = {w: k for k, w in enumerate(during)}
        dropped = [w for w in (u, v) if last[w] == i and w != s and w != t]
        s_done = last.get(s) == i
        t_done = last.get(t) == i
        keep_idx = [k for k, w in enumerate(during) if w not in dropped]
        after = [during[k] for k in keep_idx]
        new_layer: dict[tuple, int] = {}

        def settle(codes):
            for w in dropped:
                if codes[index[w]] >= 2:
                    return -1
            if s_done and codes[0] == _UNUSED:
                return -1
            if t_done and codes[1] == _UNUSED:
                return -1
            if pos + 1 == len(steps):
                return -1
            key = tuple(codes[k] for k in keep_idx)
            nid = new_layer.get(key)
            if nid is None:
                nid = len(arcs)
                if nid >= node_limit:
                    raise NodeBudgetExceeded("simple-path search exceeded node limit")
                arcs.append([steps[pos + 1], -1, -1])
                new_layer[key] = nid
            return nid

        for state, nid in layer.items():
            codes = list(state) + [_UNUSED] * len(entering)
            arcs[nid][1] = settle(codes)
            arcs[nid][2] = _include(codes, index, u, v, s, t, settle)
        layer = new_layer
        tracked = after

    alive = [False] * len(arcs)
    for nid in range(len(arcs) - 1, -1, -1):
        _, c0, c1 = arcs[nid]
        alive[nid] = c0 == -2 or c1 == -2 or (c0 >= 0 and alive[c0]) or (c1 >= 0 and alive[c1])
    for nid, (step, _, c1) in enumerate(arcs):
        if alive[nid] and (c1 == -2 or (c1 >= 0 and alive[c1])):
            kept_out[perm[step - 1]] = True
    return kept_out


def _include(codes, index, u, v, s, t, settle):
    if u == t or v == s:
        return -1
    cu, cv = codes[index[u]], codes[index[v]]
    if cu == _SATURATED or cv == _SATURATED:
        return -1
    if cu >= 2 and cu % 2 == 0:   # u already has an out-edge
        return -1
    if cv >= 2 and cv % 2 == 1:   # v already has an in-edge
        return -1
    a = u if cu == _UNUSED else (cu - 3) // 2
    b = v if cv == _UNUSED else (cv - 2) // 2
    if a == v:   # closes a cycle
        return -1
    if a == s and b == t:
        # path complete: every other open fragment makes the set a non-path
        for k, c in enumerate(codes):
            w_is_part = (k == index[u] or k == index[v] or k == index[a] or k == index[b])
            if c >= 2 and not w_is_part:
                return -1
        return -2
    codes = list(codes)
    codes[index[u]] = _SATURATED if cu != _UNUSED else _start(b)
    codes[index[v]] = _SATURATED if cv != _UNUSED else _end(a)
    if a != u:
        codes[index[a]] = _start(b)
    if b != v:
        codes[index[b]] = _end(a)
    return settle(codes)


def prune_edges(g: ProbGraph, order: EdgeOrder, s: int, t: int, mode: str = "simpath",
                node_limit: int = DEFAULT_NODE_LIMIT) -> list[bool]:
    """Edges that may matter for s-t connectivity, as a keep-mask over edge ids."""
    if mode == "none":
        return [True] * g.m
    weak = weak_prune(g, s, t)
    if mode == "weak":
        return weak
    if mode != "simpath":
        raise ValueError(f"unknown prune mode {mode!r}")
    try:
        return simple_path_edges(g, order, s, t, weak, node_limit)
    except NodeBudgetExceeded:
        log.warning("simple-path pruning for (%s, %s) hit the node limit; using weak pruning",
                    g.labels[s], g.labels[t])
        return weak


# -- public construction API ----------------------------------------------------


def build_single(g: ProbGraph, order: EdgeOrder, closures: SuffixClosure, s: int, t: int,
                 store: NodeStore | None = None, prune: str = "simpath",
                 stats: SearchStats | None = None) -> Bdd:
    if store is None:
        store = NodeStore(g.m)
    if s == t:
        raise ValueError("build_single requires s != t")
    kept = prune_edges(g, order, s, t, prune, store.node_limit)
    raw = frontier_search(g, order, closures, s, t, kept, store.node_limit, stats)
    if isinstance(raw, int):
        return Bdd(store, raw)
    return Bdd(store, store.reduce(raw))


def build_multi(store: NodeStore, roots: dict, seeds: Iterable[int], t: int) -> Bdd:
    """Union of single-seed diagrams; ``roots`` maps ``(s, t)`` to refs or Bdds."""
    seeds = sorted(set(seeds))
    if t in seeds:
        return Bdd(store, TRUE)
    acc = FALSE
    for s in seeds:
        r = roots[(s, t)]
        acc = store.apply_or(acc, getattr(r, "root", r))
    return Bdd(store, acc)


class ConnectivityForest:
    """All s-t connectivity diagrams of one graph in a single shared store.

    Single-seed roots are built lazily by frontier search and cached; seed-set
    roots are unions of them, also cached.
    """

    def __init__(self, g: ProbGraph, order: EdgeOrder | None = None, *, prune: str = "simpath",
                 node_limit: int = DEFAULT_NODE_LIMIT, beam_width: int = 100, order_seed: int = 0):
        if prune not in PRUNE_MODES:
            raise ValueError(f"unknown prune mode {prune!r}")
        self.graph = g
        self.order = order if order is not None else beam_search_order(g, beam_width, order_seed)
        if len(self.order.perm) != g.m:
            raise ValueError("edge order does not match graph")
        self.edge_level = self.order.levels()
        self.closures = suffix_closures(g, self.order)
        self.store = NodeStore(g.m, node_limit)
        self.prune = prune
        self._single: dict[tuple[int, int], int] = {}
        self._multi: dict[tuple[tuple[int, ...], int], int] = {}
        self.build_seconds: dict[tuple[int, int], float] = {}
        self.search_stats: dict[tuple[int, int], SearchStats] = {}

    def single(self, s: int, t: int) -> int:
        if s == t:
            return TRUE
        key = (s, t)
        ref = self._single.get(key)
        if ref is None:
            stats = SearchStats()
            t0 = time.perf_counter()
            ref = build_single(self.graph, self.order, self.closures, s, t,
                               self.store, self.prune, stats).root
            self.build_seconds[key] = time.perf_counter() - t0
            self.search_stats[key] = stats
            self._single[key] = ref
        return ref

    def multi(self, seeds: Iterable[int], t: int) -> int:
        seeds = tuple(sorted(set(seeds)))
        if not seeds:
            raise ValueError("seed set is empty")
        if t in seeds:
            return TRUE
        if len(seeds) == 1:
            return self.single(seeds[0], t)
        key = (seeds, t)
        ref = self._multi.get(key)
        if ref is None:
            roots = {(s, t): self.single(s, t) for s in seeds}
            ref = build_multi(self.store, roots, seeds, t).root
            self._multi[key] = ref
        return ref

    def union(self, f: int, g: int) -> int:
        return self.store.apply_or(f, g)

    def bdd(self, ref: int) -> Bdd:
        return Bdd(self.store, ref)

    def build_all(self) -> dict[tuple[int, int], int]:
        """Roots for every ordered pair of distinct vertices."""
        n = self.graph.n
        return {(s, t): self.single(s, t) for s in range(n) for t in range(n) if s != t}

    def single_roots(self) -> dict[tuple[int, int], int]:
        return dict(self._single)

    def to_levels(self, edges: Iterable[int]) -> set[int]:
        return {self.edge_level[e] for e in edges}

    def to_edges(self, levels: Iterable[int]) -> set[int]:
        perm = self.order.perm
        return {perm[lv - 1] for lv in levels}

    def contains(self, ref: int, edges: Iterable[int]) -> bool:
        return self.store.contains(ref, self.to_levels(edges))

    def prob_by_level(self, probs: Sequence[float] | None = None) -> list[float]:
        """Probabilities indexed by level (index 0 and ``m + 1`` unused)."""
        if probs is None:
            probs = self.graph.probs
        if len(probs) != self.graph.m:
            raise ValueError("probability vector length does not match edge count")
        out = [0.0] * (self.graph.m + 2)
        for e, p in enumerate(probs):
            out[self.edge_level[e]] = float(p)
        return out

    def shared_size(self) -> int:
        return self.store.shared_size(set(self._single.values()) | set(self._multi.values()))
