"""Shared, hash-consed reduced ordered BDDs.

Nodes live in an append-only :class:`NodeStore`; a node is referred to by its
integer index.  Refs ``0`` and ``1`` are the terminals.  Levels run from 1 to
``num_vars``; terminals sit at level ``num_vars + 1``.  A level that does not
appear on a root-to-terminal path is a don't-care on that path.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

FALSE = 0
TRUE = 1
DEFAULT_NODE_LIMIT = 1 << 26


class NodeBudgetExceeded(MemoryError):
    """The store would grow past its configured node limit."""


@dataclass
class RawDiagram:
    """An ordered but possibly unreduced diagram.

    Child refs ``0``/``1`` are terminals and ``k + 2`` is raw node ``k``.
    """
    levels: list[int]
    lo: list[int]
    hi: list[int]
    root: int


class NodeStore:
    def __init__(self, num_vars: int, node_limit: int = DEFAULT_NODE_LIMIT):
        self.num_vars = num_vars
        self.node_limit = node_limit
        self.level = [num_vars + 1, num_vars + 1]
        self.lo = [FALSE, TRUE]
        self.hi = [FALSE, TRUE]
        self._unique: dict[tuple[int, int, int], int] = {}
        self._cache: dict[tuple, int] = {}
        # apply/negate recurse once per level, a few frames each
        if sys.getrecursionlimit() < 4 * num_vars + 1000:
            sys.setrecursionlimit(4 * num_vars + 1000)

    def __len__(self) -> int:
        """Number of stored non-terminal nodes."""
        return len(self.level) - 2

    def make_node(self, level: int, lo: int, hi: int) -> int:
        if lo == hi:
            return lo
        if not (1 <= level < self.level[lo] and level < self.level[hi]):
            raise ValueError(f"level order violated: node at {level} over children at "
                             f"{self.level[lo]}, {self.level[hi]}")
        key = (level, lo, hi)
        ref = self._unique.get(key)
        if ref is None:
            if len(self.level) - 2 >= self.node_limit:
                raise NodeBudgetExceeded(f"node limit {self.node_limit} reached")
            ref = len(self.level)
            self.level.append(level)
            self.lo.append(lo)
            self.hi.append(hi)
            self._unique[key] = ref
        return ref

    # -- Boolean operations ------------------------------------------------

    def apply_or(self, f: int, g: int) -> int:
        if f == TRUE or g == TRUE:
            return TRUE
        if f == FALSE or f == g:
            return g
        if g == FALSE:
            return f
        return self._apply("or", f, g)

    def apply_and(self, f: int, g: int) -> int:
        if f == FALSE or g == FALSE:
            return FALSE
        if f == TRUE or f == g:
            return g
        if g == TRUE:
            return f
        return self._apply("and", f, g)

    def _apply(self, op: str, f: int, g: int) -> int:
        if f > g:
            f, g = g, f
        key = (op, f, g)
        ref = self._cache.get(key)
        if ref is not None:
            return ref
        lf, lg = self.level[f], self.level[g]
        top = min(lf, lg)
        f0, f1 = (self.lo[f], self.hi[f]) if lf == top else (f, f)
        g0, g1 = (self.lo[g], self.hi[g]) if lg == top else (g, g)
        rec = self.apply_or if op == "or" else self.apply_and
        ref = self.make_node(top, rec(f0, g0), rec(f1, g1))
        self._cache[key] = ref
        return ref

    def negate(self, f: int) -> int:
        if f <= TRUE:
            return 1 - f
        key = ("not", f, f)
        ref = self._cache.get(key)
        if ref is None:
            ref = self.make_node(self.level[f], self.negate(self.lo[f]), self.negate(self.hi[f]))
            self._cache[key] = ref
            self._cache[("not", ref, ref)] = f
        return ref

    # -- reduction -----------------------------------------------------------

    def reduce(self, raw: RawDiagram) -> int:
        """Hash-cons a raw diagram bottom-up into this store and return its root."""
        k = len(raw.levels)
        terminal = self.num_vars + 1

        def lvl(r):
            return terminal if r < 2 else raw.levels[r - 2]

        for i in range(k):
            if not (1 <= raw.levels[i] <= self.num_vars):
                raise ValueError(f"raw node {i} has level {raw.levels[i]} outside 1..{self.num_vars}")
            if lvl(raw.lo[i]) <= raw.levels[i] or lvl(raw.hi[i]) <= raw.levels[i]:
                raise ValueError("raw diagram is not ordered (cycle or level inversion) "
                                 f"at raw node {i}")
        mapped = [FALSE, TRUE] + [None] * k
        for i in sorted(range(k), key=lambda i: -raw.levels[i]):
            mapped[i + 2] = self.make_node(raw.levels[i], mapped[raw.lo[i]], mapped[raw.hi[i]])
        return mapped[raw.root]

    # -- queries ---------------------------------------------------------------

    def nodes_below(self, roots: Iterable[int]) -> set[int]:
        """Non-terminal refs reachable from any of ``roots``."""
        seen: set[int] = set()
        stack = [r for r in roots if r > TRUE]
        while stack:
            f = stack.pop()
            if f in seen:
                continue
            seen.add(f)
            for c in (self.lo[f], self.hi[f]):
                if c > TRUE and c not in seen:
                    stack.append(c)
        return seen

    def size(self, root: int) -> int:
        return len(self.nodes_below([root]))

    def shared_size(self, roots: Iterable[int]) -> int:
        return len(self.nodes_below(roots))

    def topological(self, root: int) -> list[int]:
        """Reachable non-terminals ordered root-first (ascending level)."""
        return sorted(self.nodes_below([root]), key=self.level.__getitem__)

    def count(self, root: int) -> int:
        """Number of satisfying assignments over all ``num_vars`` variables."""
        if root <= TRUE:
            return root << self.num_vars
        level = self.level
        memo = {FALSE: 0, TRUE: 1}
        for f in reversed(self.topological(root)):
            lv = level[f]
            lo, hi = self.lo[f], self.hi[f]
            memo[f] = (memo[lo] << (level[lo] - lv - 1)) + (memo[hi] << (level[hi] - lv - 1))
        return memo[root] << (level[root] - 1)

    def contains(self, root: int, levels: Iterable[int]) -> bool:
        chosen = set(levels)
        f = root
        while f > TRUE:
            f = self.hi[f] if self.level[f] in chosen else self.lo[f]
        return f == TRUE

    def export(self, roots: Mapping[str, int]) -> str:
        """Text dump: ``id level lo hi`` per node (children first), then ``root <label> <id>``."""
        nodes = sorted(self.nodes_below(roots.values()), key=lambda f: (-self.level[f], f))
        lines = [f"{f} {self.level[f]} {self.lo[f]} {self.hi[f]}" for f in nodes]
        lines += [f"root {label} {ref}" for label, ref in roots.items()]
        return "\n".join(lines) + "\n"

    def import_text(self, text: str) -> dict[str, int]:
        """Load an :meth:`export` dump into this store; returns label -> ref."""
        remap = {FALSE: FALSE, TRUE: TRUE}
        roots = {}
        for line in text.splitlines():
            fields = line.split()
            if not fields:
                continue
            if fields[0] == "root":
                roots[" ".join(fields[1:-1])] = remap[int(fields[-1])]
            else:
                f, lv, lo, hi = map(int, fields)
                remap[f] = self.make_node(lv, remap[lo], remap[hi])
        return roots


@dataclass(frozen=True)
class Bdd:
    store: NodeStore
    root: int

    @property
    def num_vars(self) -> int:
        return self.store.num_vars

    def _check(self, other: "Bdd") -> None:
        if self.store is not other.store:
            raise ValueError("operands belong to different node stores")

    def __or__(self, other: "Bdd") -> "Bdd":
        self._check(other)
        return Bdd(self.store, self.store.apply_or(self.root, other.root))

    def __and__(self, other: "Bdd") -> "Bdd":
        self._check(other)
        return Bdd(self.store, self.store.apply_and(self.root, other.root))

    def __invert__(self) -> "Bdd":
        return Bdd(self.store, self.store.negate(self.root))

    def __len__(self) -> int:
        return self.store.size(self.root)

    def count(self) -> int:
        return self.store.count(self.root)

    def contains(self, levels: Iterable[int]) -> bool:
        return self.store.contains(self.root, levels)


def make_node(store: NodeStore, level: int, lo: int, hi: int) -> int:
    return store.make_node(level, lo, hi)


def apply_or(store: NodeStore, f: Bdd, g: Bdd) -> Bdd:
    _same_store(store, f, g)
    return f | g


def apply_and(store: NodeStore, f: Bdd, g: Bdd) -> Bdd:
    _same_store(store, f, g)
    return f & g


def negate(store: NodeStore, f: Bdd) -> Bdd:
    _same_store(store, f)
    return ~f


def reduce(store: NodeStore, raw: RawDiagram) -> Bdd:
    return Bdd(store, store.reduce(raw))


def count_models(f: Bdd) -> int:
    return f.count()


def contains(f: Bdd, assignment: Iterable[int]) -> bool:
    """Membership of an assignment given as the set of levels set to true."""
    return f.contains(assignment)


def from_family(store: NodeStore, family: Iterable[Sequence[int]]) -> Bdd:
    """Build the BDD of an explicit set family (sets of levels) by OR-ing minterms."""
    result = FALSE
    for members in family:
        chosen = set(members)
        cube = TRUE
        for lv in range(store.num_vars, 0, -1):
            cube = store.make_node(lv, FALSE, cube) if lv in chosen else store.make_node(lv, cube, FALSE)
        result = store.apply_or(result, cube)
    return Bdd(store, result)


def _same_store(store: NodeStore, *fs: Bdd) -> None:
    for f in fs:
        if f.store is not store:
            raise ValueError("operand belongs to a different node store")
