"""Construction time and diagram size on 5 x w grids versus matched random graphs.

Prints one CSV row per instance.  Random graphs get the same vertex count and
undirected edge count; they usually exhaust the node budget well before the
grids do.
"""
import argparse
import random
import sys
import time
from dataclasses import dataclass

from icbdd.bdd import NodeBudgetExceeded
from icbdd.frontier import ConnectivityForest
from icbdd.graph import ProbGraph


@dataclass
class Config:
    rows: int = 5
    min_width: int = 2
    max_width: int = 10
    prob: float = 0.5
    node_limit: int = 1 << 26
    random_node_limit: int = 200_000
    seed: int = 0


def grid(width: int, rows: int, p: float) -> ProbGraph:
    idx = lambda r, c: c * rows + r  # noqa: E731
    edges = []
    for c in range(width):
        for r in range(rows):
            if r + 1 < rows:
                edges += [(idx(r, c), idx(r + 1, c), p), (idx(r + 1, c), idx(r, c), p)]
            if c + 1 < width:
                edges += [(idx(r, c), idx(r, c + 1), p), (idx(r, c + 1), idx(r, c), p)]
    return ProbGraph.from_edges(edges)


def matched_random(n: int, undirected_edges: int, p: float, rng: random.Random) -> ProbGraph:
    pairs = rng.sample([(u, v) for u in range(n) for v in range(u + 1, n)], undirected_edges)
    return ProbGraph.from_edges([(u, v, p) for u, v in pairs] + [(v, u, p) for u, v in pairs])


def measure(kind: str, w: int, g: ProbGraph, limit: int) -> str:
    t0 = time.perf_counter()
    try:
        forest = ConnectivityForest(g, node_limit=limit)
        ref = forest.single(0, g.n - 1)
        status, size = "ok", forest.store.size(ref)
        width = forest.order.width
    except NodeBudgetExceeded:
        status, size, width = "node_limit", "", ""
    return f"{kind},{w},{g.n},{g.m},{width},{size},{status},{time.perf_counter() - t0:.3f}"


def main(cfg: Config) -> None:
    rng = random.Random(cfg.seed)
    print("kind,w,n,m,width,size,status,seconds")
    for w in range(cfg.min_width, cfg.max_width + 1):
        g = grid(w, cfg.rows, cfg.prob)
        print(measure("grid", w, g, cfg.node_limit), flush=True)
        rnd = matched_random(g.n, g.m // 2, cfg.prob, rng)
        print(measure("random", w, rnd, cfg.random_node_limit), flush=True)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for name, value in vars(Config()).items():
        ap.add_argument("--" + name.replace("_", "-"), type=type(value), default=value)
    main(Config(**vars(ap.parse_args(sys.argv[1:]))))
