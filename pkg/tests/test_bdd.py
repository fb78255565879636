import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icbdd.bdd import (FALSE, TRUE, Bdd, NodeBudgetExceeded, NodeStore, RawDiagram, apply_and,
                       apply_or, contains, count_models, from_family, make_node, negate, reduce)

# variables a, b, c at levels 1, 2, 3
TRI_FAMILY = [{3}, {1, 2}, {1, 3}, {2, 3}, {1, 2, 3}]


def all_subsets(m):
    for r in range(m + 1):
        yield from (set(c) for c in itertools.combinations(range(1, m + 1), r))


def family_of(f: Bdd):
    return {frozenset(x) for x in all_subsets(f.num_vars) if f.contains(x)}


@pytest.fixture
def store():
    return NodeStore(3)


def test_make_node_rules(store):
    x = store.make_node(3, FALSE, TRUE)
    assert store.make_node(2, x, x) == x
    assert store.make_node(2, FALSE, x) == store.make_node(2, FALSE, x)
    assert len(store) == 2


def test_make_node_shared_across_roots(store):
    r1 = store.make_node(2, FALSE, store.make_node(3, FALSE, TRUE))
    r2 = store.make_node(1, store.make_node(3, FALSE, TRUE), TRUE)
    assert store.shared_size([r1, r2]) == 3 < store.size(r1) + store.size(r2)


def test_make_node_rejects_level_inversion(store):
    x = store.make_node(2, FALSE, TRUE)
    with pytest.raises(ValueError):
        store.make_node(3, x, TRUE)
    with pytest.raises(ValueError):
        store.make_node(2, x, TRUE)


def test_node_limit():
    s = NodeStore(3, node_limit=1)
    s.make_node(3, FALSE, TRUE)
    with pytest.raises(NodeBudgetExceeded):
        s.make_node(2, FALSE, TRUE)


def test_identities(store):
    f = from_family(store, TRI_FAMILY)
    zero, one = Bdd(store, FALSE), Bdd(store, TRUE)
    assert apply_or(store, f, zero).root == f.root
    assert apply_and(store, f, one).root == f.root
    assert apply_or(store, f, one).root == TRUE
    assert apply_and(store, f, zero).root == FALSE
    assert negate(store, negate(store, f)).root == f.root


def test_and_example(store):
    f = from_family(store, TRI_FAMILY)
    g = from_family(store, [s for s in all_subsets(3) if 1 in s])
    assert family_of(apply_and(store, f, g)) == {frozenset(s) for s in ({1, 2}, {1, 3}, {1, 2, 3})}


def test_mixed_stores_rejected(store):
    other = NodeStore(3)
    with pytest.raises(ValueError):
        Bdd(store, TRUE) | Bdd(other, TRUE)
    with pytest.raises(ValueError):
        apply_and(store, Bdd(other, TRUE), Bdd(store, TRUE))


def test_triangle_family_counts_and_membership(store):
    f = from_family(store, TRI_FAMILY)
    assert count_models(f) == 5
    assert len(f) == 3   # c-test, b-test with c below, and the root a-test
    assert contains(f, {3})
    assert not contains(f, {1})
    assert contains(f, {1, 2, 3})
    assert count_models(Bdd(store, TRUE)) == 8
    assert count_models(Bdd(store, FALSE)) == 0


def test_count_uses_arbitrary_precision():
    big = NodeStore(200)
    f = Bdd(big, big.make_node(100, FALSE, TRUE))
    assert f.count() == 2 ** 199


def test_reduce_fixpoint(store):
    f = from_family(store, TRI_FAMILY)
    nodes = store.topological(f.root)
    idx = {r: k + 2 for k, r in enumerate(nodes)}
    idx.update({FALSE: FALSE, TRUE: TRUE})
    raw = RawDiagram([store.level[r] for r in nodes], [idx[store.lo[r]] for r in nodes],
                     [idx[store.hi[r]] for r in nodes], idx[f.root])
    before = len(store)
    assert reduce(store, raw).root == f.root
    assert len(store) == before


def test_reduce_merges_and_eliminates(store):
    # raw 0 at level 1 -> raw 1 / raw 2, both (3, F, T): merged, then root has lo == hi
    raw = RawDiagram([1, 3, 3], [3, FALSE, FALSE], [4, TRUE, TRUE], 2)
    r = reduce(store, raw)
    assert r.root == store.make_node(3, FALSE, TRUE)
    assert len(store) == 1
    # lo == hi on a raw node that is a child: parent rewired past it
    raw = RawDiagram([1, 2, 3], [3, 4, FALSE], [TRUE, 4, TRUE], 2)
    r = reduce(store, raw)
    assert store.lo[r.root] == store.make_node(3, FALSE, TRUE)


def test_reduce_rejects_cycles(store):
    with pytest.raises(ValueError, match="not ordered"):
        reduce(store, RawDiagram([1, 2], [3, 2], [TRUE, TRUE], 2))
    with pytest.raises(ValueError):
        reduce(store, RawDiagram([2, 1], [3, FALSE], [TRUE, TRUE], 2))


def test_export_import_roundtrip(store):
    f = from_family(store, TRI_FAMILY)
    g = from_family(store, [{1}, {2, 3}])
    text = store.export({"f": f.root, "g": g.root})
    fresh = NodeStore(3)
    roots = fresh.import_text(text)
    assert family_of(Bdd(fresh, roots["f"])) == family_of(f)
    assert family_of(Bdd(fresh, roots["g"])) == family_of(g)
    assert fresh.shared_size(roots.values()) == store.shared_size([f.root, g.root])


families = st.integers(1, 5).flatmap(
    lambda m: st.tuples(st.just(m), st.sets(st.integers(0, 2 ** m - 1)), st.sets(st.integers(0, 2 ** m - 1))))


def _levels(mask, m):
    return {i + 1 for i in range(m) if mask >> i & 1}


@settings(max_examples=150, deadline=None)
@given(families)
def test_algebra_matches_set_semantics(case):
    m, fa, fb = case
    store = NodeStore(m)
    A = {frozenset(_levels(x, m)) for x in fa}
    Bs = {frozenset(_levels(x, m)) for x in fb}
    f = from_family(store, A)
    g = from_family(store, Bs)
    universe = {frozenset(s) for s in all_subsets(m)}
    assert family_of(f | g) == A | Bs
    assert family_of(f & g) == A & Bs
    assert family_of(~f) == universe - A
    assert f.count() == len(A)
    assert f.count() + (~f).count() == 2 ** m
    assert (f | g).count() + (f & g).count() == f.count() + g.count()
    # canonicity: the same family built by another route gives the same ref
    assert (~(~f & ~g)).root == (f | g).root
    assert from_family(store, sorted(A, key=sorted)).root == f.root


@settings(max_examples=100, deadline=None)
@given(families)
def test_store_invariants(case):
    m, fa, fb = case
    store = NodeStore(m)
    f = from_family(store, [_levels(x, m) for x in fa])
    g = from_family(store, [_levels(x, m) for x in fb])
    _ = (f & ~g) | (g & ~f)
    seen = set()
    for r in range(2, len(store.level)):
        key = (store.level[r], store.lo[r], store.hi[r])
        assert key not in seen
        seen.add(key)
        assert store.lo[r] != store.hi[r]
        assert store.level[store.lo[r]] > store.level[r]
        assert store.level[store.hi[r]] > store.level[r]


def test_random_raw_reduce_preserves_family():
    rng = random.Random(3)
    for _ in range(100):
        m = rng.randint(1, 5)
        k = rng.randint(1, 8)
        levels = sorted(rng.randint(1, m) for _ in range(k))
        lo, hi = [], []
        for i in range(k):
            below = [j + 2 for j in range(k) if levels[j] > levels[i]] + [FALSE, TRUE]
            lo.append(rng.choice(below))
            hi.append(rng.choice(below))
        raw = RawDiagram(levels, lo, hi, 2)

        def raw_contains(levels_set, ref=2):
            while ref > TRUE:
                i = ref - 2
                ref = hi[i] if levels[i] in levels_set else lo[i]
            return ref == TRUE

        store = NodeStore(m)
        f = reduce(store, raw)
        for s in all_subsets(m):
            assert f.contains(s) == raw_contains(s)
        assert make_node(store, 1, f.root, f.root) == f.root
