"""Monte-Carlo error against the exact spread for growing sample counts."""
import argparse
import random
from dataclasses import dataclass, field

from icbdd.frontier import ConnectivityForest
from icbdd.graph import ProbGraph, read_graph
from icbdd.oracle import monte_carlo_spread
from icbdd.spread import influence_spread


@dataclass
class Config:
    graph: str | None = None        # edge list; a fixed 20-edge synthetic graph if omitted
    seeds: list[str] = field(default_factory=lambda: ["v0"])
    samples: list[int] = field(default_factory=lambda: [10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6, 10 ** 7])
    repeats: int = 3
    rng_seed: int = 1000
    prob: float | None = None


def synthetic() -> ProbGraph:
    rng = random.Random(20)
    n = 10
    pairs = rng.sample([(u, v) for u in range(n) for v in range(n) if u != v], 20)
    return ProbGraph.from_edges([(u, v, round(rng.uniform(0.1, 0.6), 3)) for u, v in pairs],
                                labels=[f"v{i}" for i in range(n)])


def main(cfg: Config) -> None:
    g = synthetic() if cfg.graph is None else read_graph(cfg.graph, default_prob=cfg.prob)
    if cfg.prob is not None:
        g = g.with_probs([cfg.prob] * g.m)
    seeds = [g.index(s) for s in cfg.seeds]
    exact = influence_spread(ConnectivityForest(g), seeds).sigma
    print("N,repeat,estimate,exact,error,stderr")
    for n in cfg.samples:
        for r in range(cfg.repeats):
            est, se = monte_carlo_spread(g, seeds, n, seed=cfg.rng_seed + r)
            print(f"{n},{r},{est:.10f},{exact:.10f},{est - exact:.3e},{se:.3e}", flush=True)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--graph")
    ap.add_argument("--seeds", default="v0")
    ap.add_argument("--samples", default="1000,10000,100000,1000000,10000000")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--rng-seed", type=int, default=1000)
    ap.add_argument("--prob", type=float)
    a = ap.parse_args()
    main(Config(a.graph, a.seeds.split(","), [int(x) for x in a.samples.split(",")],
                a.repeats, a.rng_seed, a.prob))
