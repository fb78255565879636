import random

import pytest
from hypothesis import strategies as st

from icbdd.graph import ProbGraph
from icbdd.ordering import frontier_profile

# Edge ids: a = s->u, b = u->t, c = s->t; vertices s=0, u=1, t=2.
S, U, T = 0, 1, 2
A, B, C = 0, 1, 2


def triangle(p=0.5):
    return ProbGraph.from_edges([(S, U, p), (U, T, p), (S, T, p)], labels=["s", "u", "t"])


@pytest.fixture
def tri_graph():
    return triangle()


@pytest.fixture
def tri_order(tri_graph):
    return frontier_profile(tri_graph, [A, B, C])


def random_digraph(rng: random.Random, max_n=8, max_m=12, min_n=2) -> ProbGraph:
    n = rng.randint(min_n, max_n)
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    m = rng.randint(0, min(max_m, len(pairs)))
    chosen = rng.sample(pairs, m)
    return ProbGraph.from_edges([(u, v, rng.uniform(0.01, 0.99)) for u, v in chosen],
                                labels=[f"v{i}" for i in range(n)])


def grid(width, rows=5, p=0.5) -> ProbGraph:
    """rows x width grid, every undirected edge as two directed edges."""
    idx = lambda r, c: c * rows + r  # noqa: E731
    edges = []
    for c in range(width):
        for r in range(rows):
            if r + 1 < rows:
                edges += [(idx(r, c), idx(r + 1, c), p), (idx(r + 1, c), idx(r, c), p)]
            if c + 1 < width:
                edges += [(idx(r, c), idx(r, c + 1), p), (idx(r, c + 1), idx(r, c), p)]
    return ProbGraph.from_edges(edges, labels=[f"{i % rows},{i // rows}" for i in range(rows * width)])


@st.composite
def small_graphs(draw, max_n=7, max_m=10, min_n=2):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=min(max_m, len(pairs)), unique=True))
    probs = draw(st.lists(st.floats(0.0, 1.0), min_size=len(chosen), max_size=len(chosen)))
    return ProbGraph.from_edges([(u, v, p) for (u, v), p in zip(chosen, probs)],
                                labels=[f"v{i}" for i in range(n)])
