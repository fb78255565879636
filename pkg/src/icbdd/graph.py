"""Directed graphs with per-edge activation probabilities.

Edge-list text format: one ``tail head [prob]`` record per line, fields split
on whitespace, ``#`` starts a comment.  Vertex labels are arbitrary strings,
mapped to dense ids in order of first appearance.
"""
from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

log = logging.getLogger(__name__)


class GraphFormatError(ValueError):
    """Raised for unparsable or out-of-range edge-list input."""


@dataclass(frozen=True)
class ProbGraph:
    labels: tuple[str, ...]
    tails: tuple[int, ...]
    heads: tuple[int, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        if not (len(self.tails) == len(self.heads) == len(self.probs)):
            raise ValueError("tails, heads and probs must have equal length")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("vertex labels must be unique")
        n = len(self.labels)
        seen = set()
        for u, v, p in zip(self.tails, self.heads, self.probs):
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) references unknown vertex")
            if u == v:
                raise ValueError(f"self-loop on vertex {self.labels[u]!r}")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge {self.labels[u]!r}->{self.labels[v]!r}")
            seen.add((u, v))
            if not (0.0 <= p <= 1.0) or math.isnan(p):
                raise ValueError(f"probability out of range: {p}")

    @classmethod
    def from_edges(cls, edges: Iterable[tuple], labels: Sequence[str] | None = None,
                   default_prob: float | None = None) -> "ProbGraph":
        """Build from ``(u, v)`` or ``(u, v, p)`` tuples over integer vertex ids."""
        tails, heads, probs = [], [], []
        top = -1
        for e in edges:
            u, v = int(e[0]), int(e[1])
            p = float(e[2]) if len(e) > 2 else default_prob
            if p is None:
                raise ValueError("probability missing and no default given")
            tails.append(u)
            heads.append(v)
            probs.append(p)
            top = max(top, u, v)
        if labels is None:
            labels = [str(i) for i in range(top + 1)]
        return cls(tuple(labels), tuple(tails), tuple(heads), tuple(probs))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return len(self.tails)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.tails, self.heads))

    def index(self, label: str) -> int:
        try:
            return self._label_index()[label]
        except KeyError:
            raise KeyError(f"unknown vertex {label!r}") from None

    def _label_index(self) -> dict[str, int]:
        cache = self.__dict__.get("_label_cache")
        if cache is None:
            cache = {lab: i for i, lab in enumerate(self.labels)}
            object.__setattr__(self, "_label_cache", cache)
        return cache

    def out_edges(self) -> list[list[int]]:
        """Edge ids leaving each vertex."""
        out = [[] for _ in range(self.n)]
        for e, u in enumerate(self.tails):
            out[u].append(e)
        return out

    def with_probs(self, probs: Sequence[float]) -> "ProbGraph":
        return ProbGraph(self.labels, self.tails, self.heads, tuple(float(p) for p in probs))

    def dumps(self) -> str:
        """Serialize to the edge-list text format (reloads to an equal graph)."""
        lines = [f"{self.labels[u]} {self.labels[v]} {p!r}"
                 for u, v, p in zip(self.tails, self.heads, self.probs)]
        return "\n".join(lines) + ("\n" if lines else "")


def _parse_prob(token: str, lineno: int) -> float:
    try:
        p = float(token)
    except ValueError:
        raise GraphFormatError(f"line {lineno}: bad probability {token!r}") from None
    if not (0.0 <= p <= 1.0):
        raise GraphFormatError(f"line {lineno}: probability out of range: {token}")
    return p


def load_graph(text: str | bytes, undirected: bool = False,
               default_prob: float | None = None) -> ProbGraph:
    """Parse edge-list text into a normalized :class:`ProbGraph`.

    Self-loops are dropped.  A repeated ``(tail, head)`` pair keeps the last
    probability seen.  With ``undirected`` every line yields both directions.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    if default_prob is not None and not (0.0 <= default_prob <= 1.0):
        raise GraphFormatError(f"default probability out of range: {default_prob}")

    ids: dict[str, int] = {}
    edge_prob: dict[tuple[int, int], float] = {}

    def vid(label):
        if label not in ids:
            ids[label] = len(ids)
        return ids[label]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) == 2:
            if default_prob is None:
                raise GraphFormatError(
                    f"line {lineno}: no probability given and no default probability set")
            p = default_prob
        elif len(fields) == 3:
            p = _parse_prob(fields[2], lineno)
        else:
            raise GraphFormatError(f"line {lineno}: expected 'tail head [prob]', got {raw!r}")
        u, v = vid(fields[0]), vid(fields[1])
        if u == v:
            log.warning("line %d: dropping self-loop on %r", lineno, fields[0])
            continue
        pairs = [(u, v), (v, u)] if undirected else [(u, v)]
        for pair in pairs:
            if pair in edge_prob:
                log.warning("line %d: duplicate edge %s -> %s, keeping last probability",
                            lineno, *(list(ids)[x] for x in pair))
            edge_prob[pair] = p

    labels = tuple(ids)
    tails = tuple(u for u, _ in edge_prob)
    heads = tuple(v for _, v in edge_prob)
    return ProbGraph(labels, tails, heads, tuple(edge_prob.values()))


def read_graph(path, undirected: bool = False, default_prob: float | None = None) -> ProbGraph:
    with open(path, "rb") as fh:
        return load_graph(fh.read(), undirected=undirected, default_prob=default_prob)


def reachable_set(g: ProbGraph, sources: Iterable[int],
                  edges: Iterable[int] | None = None) -> set[int]:
    """Vertices reachable from ``sources`` (inclusive).

    If ``edges`` is given, only those edge ids are traversable.
    """
    sources = set(sources)
    for s in sources:
        if not (0 <= s < g.n):
            raise KeyError(f"unknown vertex id {s}")
    if edges is None:
        adj = [[g.heads[e] for e in out] for out in g.out_edges()]
    else:
        adj = [[] for _ in range(g.n)]
        for e in edges:
            adj[g.tails[e]].append(g.heads[e])
    seen = set(sources)
    queue = deque(sources)
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


class SuffixClosure:
    """Reachability of ``G[E^{>j}]`` for every prefix length ``j`` of an edge order.

    ``rows(j)[u]`` is an int bitset of the vertices reachable from ``u`` using
    only the edges after position ``j`` (so ``u`` always reaches itself).
    """

    def __init__(self, g: ProbGraph, perm: Sequence[int]):
        n, m = g.n, len(perm)
        current = [1 << u for u in range(n)]
        tables = [None] * (m + 1)
        tables[m] = tuple(current)
        # Insert edges back to front; adding u->v extends every row that reaches u.
        for j in range(m, 0, -1):
            e = perm[j - 1]
            u, v = g.tails[e], g.heads[e]
            bit_u, row_v = 1 << u, current[v]
            if not current[u] >> v & 1:
                current = [r | row_v if r & bit_u else r for r in current]
            tables[j - 1] = tuple(current)
        self._tables = tables
        self.n = n
        self.m = m

    def rows(self, j: int) -> tuple[int, ...]:
        return self._tables[j]

    def reaches(self, j: int, u: int, v: int) -> bool:
        return bool(self._tables[j][u] >> v & 1)

    def matrix(self, j: int) -> list[list[bool]]:
        return [[bool(r >> v & 1) for v in range(self.n)] for r in self._tables[j]]

    def __len__(self):
        return self.m + 1


def suffix_closures(g: ProbGraph, order) -> SuffixClosure:
    perm = getattr(order, "perm", order)
    if sorted(perm) != list(range(g.m)):
        raise ValueError("order is not a permutation of the graph's edges")
    return SuffixClosure(g, perm)
