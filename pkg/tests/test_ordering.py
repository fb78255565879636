import itertools

import pytest
from hypothesis import given, settings, strategies as st

from conftest import A, B, C, S, T, U, grid, small_graphs, triangle
from icbdd.graph import ProbGraph
from icbdd.ordering import beam_search_order, frontier_profile, load_order, save_order


def brute_frontiers(g, perm):
    out = []
    for i in range(1, len(perm) + 1):
        before = {x for e in perm[:i] for x in g.edges[e]}
        after = {x for e in perm[i:] for x in g.edges[e]}
        out.append(frozenset(before & after))
    return out


def test_triangle_profile_by_hand():
    order = frontier_profile(triangle(), [A, B, C])
    assert order.frontiers == (frozenset({S, U}), frozenset({S, T}), frozenset())
    assert order.enter == (frozenset({S, U}), frozenset({T}), frozenset())
    assert order.leave == (frozenset(), frozenset({U}), frozenset({S, T}))
    assert order.width == 2


def test_single_edge():
    g = ProbGraph.from_edges([(0, 1, 0.5)])
    order = frontier_profile(g, [0])
    assert order.frontiers == (frozenset(),)
    assert order.enter == order.leave == (frozenset({0, 1}),)
    assert order.width == 0
    assert beam_search_order(g).perm == (0,)


@pytest.mark.parametrize("perm", list(itertools.permutations(range(3))))
def test_star_width_one(perm):
    g = ProbGraph.from_edges([(0, 1, 0.5), (0, 2, 0.5), (0, 3, 0.5)])
    assert frontier_profile(g, perm).width == 1


@pytest.mark.parametrize("beam", [1, 3, 100])
def test_path_graph_width_one(beam):
    g = ProbGraph.from_edges([(2, 3, 0.5), (0, 1, 0.5), (1, 2, 0.5)])
    order = beam_search_order(g, beam)
    assert order.width == 1
    assert [g.edges[e] for e in order.perm] in ([(0, 1), (1, 2), (2, 3)], [(2, 3), (1, 2), (0, 1)])


def test_rejects_non_permutation():
    with pytest.raises(ValueError):
        frontier_profile(triangle(), [0, 1, 1])
    with pytest.raises(ValueError):
        beam_search_order(triangle(), 0)


@given(small_graphs(max_n=7, max_m=12), st.randoms(use_true_random=False))
@settings(max_examples=80)
def test_profile_matches_definition(g, rnd):
    perm = list(range(g.m))
    rnd.shuffle(perm)
    order = frontier_profile(g, perm)
    assert list(order.frontiers) == brute_frontiers(g, perm)
    assert order.width == max((len(w) for w in order.frontiers), default=0)
    assert sorted(order.perm) == list(range(g.m))
    for v in {x for e in g.edges for x in e}:
        steps = [i for i, e in enumerate(perm, 1) if v in g.edges[e]]
        assert v in order.enter[steps[0] - 1] and v in order.leave[steps[-1] - 1]


@given(small_graphs(max_n=8, max_m=14), st.integers(1, 20), st.integers(0, 5))
@settings(max_examples=60)
def test_beam_never_worse_than_input_order(g, beam, seed):
    order = beam_search_order(g, beam, seed)
    assert sorted(order.perm) == list(range(g.m))
    assert order.width <= frontier_profile(g, range(g.m)).width
    assert order == beam_search_order(g, beam, seed)


@pytest.mark.parametrize("width", range(2, 11))
def test_grid_width_bounded(width):
    g = grid(width)
    assert beam_search_order(g).width <= 7


def test_order_file_roundtrip(tmp_path):
    g = grid(3)
    order = beam_search_order(g)
    path = tmp_path / "order.txt"
    save_order(order, path)
    assert load_order(g, path) == order
