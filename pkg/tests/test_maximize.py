import random

import pytest
from conftest import S, random_digraph, triangle

from icbdd.frontier import ConnectivityForest
from icbdd.graph import ProbGraph
from icbdd.maximize import greedy
from icbdd.oracle import brute_spread


def test_star_picks_center():
    # center is not vertex 0, so a wrong argmax cannot pass by the tie rule
    g = ProbGraph.from_edges([(1, 0, .5), (1, 2, .5), (1, 3, .5)], labels=["x", "c", "y", "z"])
    trace = greedy(ConnectivityForest(g), 1)
    assert trace.seeds == [g.index("c")]
    assert trace.steps[0].sigma == pytest.approx(2.5)
    assert trace.error is None


def test_triangle_picks_s():
    trace = greedy(ConnectivityForest(triangle()), 1)
    assert trace.seeds == [S]
    assert trace.evaluations[0] == pytest.approx({0: 2.125, 1: 1.5, 2: 1.0})


def test_all_vertices():
    g = triangle(0.3)
    trace = greedy(ConnectivityForest(g), g.n)
    assert sorted(trace.seeds) == list(range(g.n))
    assert trace.steps[-1].sigma == pytest.approx(g.n)


def test_rejects_bad_k():
    forest = ConnectivityForest(triangle())
    for k in (0, 4):
        with pytest.raises(ValueError):
            greedy(forest, k)


def test_ties_go_to_smallest_id():
    # two isolated edges with identical probabilities
    g = ProbGraph.from_edges([(0, 1, .5), (2, 3, .5)])
    assert greedy(ConnectivityForest(g), 2).seeds == [0, 2]


def test_marginals_match_brute_force():
    rng = random.Random(17)
    for _ in range(10):
        g = random_digraph(rng, max_n=6, max_m=10)
        k = min(3, g.n)
        trace = greedy(ConnectivityForest(g), k)
        chosen = []
        prev = 0.0
        for step, scores in zip(trace.steps, trace.evaluations):
            for u, sigma in scores.items():
                assert abs(sigma - brute_spread(g, chosen + [u])[0]) <= 1e-9
            assert abs(step.marginal - (step.sigma - prev)) <= 1e-12
            assert step.sigma >= prev - 1e-12
            chosen.append(step.vertex)
            prev = step.sigma


def test_deterministic_and_rows():
    g = random_digraph(random.Random(3), max_n=7, max_m=12)
    a = greedy(ConnectivityForest(g), 3)
    b = greedy(ConnectivityForest(g), 3)
    assert a.seeds == b.seeds
    assert [s.sigma for s in a.steps] == [s.sigma for s in b.steps]
    rows = a.to_rows(g.labels)
    assert list(rows[0]) == ["step", "vertex", "sigma", "marginal", "shared_size", "time"]
    assert rows[0]["vertex"] == g.labels[a.seeds[0]]


def test_budget_error_keeps_partial_trace():
    g = random_digraph(random.Random(3), max_n=7, max_m=12)
    trace = greedy(ConnectivityForest(g, node_limit=3), 2)
    assert trace.error is not None
    assert len(trace.steps) < 2
