"""Per-network averages over all distinct (s, t): diagram size, shared size, cardinality, time."""
import argparse
from dataclasses import dataclass, field
from decimal import Decimal

from icbdd.cli import sci
from icbdd.frontier import ConnectivityForest
from icbdd.graph import read_graph


@dataclass
class Config:
    graphs: list[str] = field(default_factory=list)
    undirected: bool = True
    prob: float = 0.5          # irrelevant to sizes and counts; needed only to load unweighted files
    beam_width: int = 100


def main(cfg: Config) -> None:
    print("graph,n,m,width,avg_time_ms,avg_size,sum_size,shared_size,avg_cardinality")
    for path in cfg.graphs:
        g = read_graph(path, undirected=cfg.undirected, default_prob=cfg.prob)
        forest = ConnectivityForest(g, beam_width=cfg.beam_width)
        roots = forest.build_all()
        pairs = len(roots)
        sizes = [forest.store.size(r) for r in roots.values()]
        card = sum(forest.store.count(r) for r in roots.values())
        ms = sum(forest.build_seconds.values()) * 1e3 / pairs
        print(f"{path},{g.n},{g.m},{forest.order.width},{ms:.2f},{sum(sizes) / pairs:.1f},"
              f"{sum(sizes)},{forest.shared_size()},{sci(Decimal(card) / pairs)}", flush=True)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("graphs", nargs="+")
    ap.add_argument("--directed", action="store_true")
    ap.add_argument("--prob", type=float, default=0.5)
    ap.add_argument("--beam-width", type=int, default=100)
    a = ap.parse_args()
    main(Config(a.graphs, not a.directed, a.prob, a.beam_width))
