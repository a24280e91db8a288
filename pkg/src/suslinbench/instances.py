"""Exhaustive and seeded instance generators for the property checks.

Conditions are enumerated up to level-preserving isomorphism: every
condition arises from a smaller one by adding a node with no successors, so
a size-by-size sweep with canonical-signature dedupe reaches all of them.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from .leveled_tree import LeveledTree
from .lex import LinearOrder
from .order_core import Condition, Node, fresh_rational

__all__ = [
    "plane_forests",
    "forest_to_tree",
    "iter_plane_trees",
    "condition_signature",
    "iter_conditions",
    "iter_extensions",
    "add_node_moves",
    "iter_normal_trees",
    "iter_interval_sequences",
    "iter_index_pairs",
    "random_linear_sequence",
    "random_tree_sequence",
]


# -- plane forests -------------------------------------------------------------

@lru_cache(maxsize=None)
def _forests(n: int, leaves: int) -> tuple:
    """Plane forests with n nodes and at most ``leaves`` leaves.

    A tree is the tuple of its child trees; a forest is a tuple of trees.
    """
    if n == 0:
        return ((),)
    out = []
    for first in range(1, n + 1):
        for kids in _forests(first - 1, leaves):
            head_leaves = max(1, _leaf_count(kids))
            if head_leaves > leaves:
                continue
            for rest in _forests(n - first, leaves - head_leaves):
                out.append(((kids,) + rest))
    return tuple(out)


@lru_cache(maxsize=None)
def _leaf_count(forest: tuple) -> int:
    return sum(max(1, _leaf_count(kids)) for kids in forest)


def plane_forests(n: int, max_leaves: Optional[int] = None) -> tuple:
    if n < 0:
        return ()
    return _forests(n, n if max_leaves is None else max_leaves) if n else ()


def forest_to_tree(forest: tuple) -> LeveledTree:
    """Level k is tagged 0, 1, ... left to right, so sibling order is tag order."""
    levels: list = []
    parent = {}
    layer = [(None, t) for t in forest]
    k = 0
    while layer:
        levels.append(list(range(len(layer))))
        nxt = []
        for i, (par, kids) in enumerate(layer):
            x = Node(k, i)
            if par is not None:
                parent[x] = par
            nxt.extend((x, c) for c in kids)
        layer = nxt
        k += 1
    return LeveledTree.from_parents(levels, parent)


def iter_plane_trees(max_nodes: int, max_leaves: Optional[int] = None,
                     min_nodes: int = 1) -> Iterator[LeveledTree]:
    """Every ordered leveled forest with node count in range, as a LeveledTree."""
    for n in range(min_nodes, max_nodes + 1):
        for f in plane_forests(n, max_leaves):
            yield forest_to_tree(f)


# -- conditions -----------------------------------------------------------------

def condition_signature(p: Condition, keep: frozenset = frozenset()) -> tuple:
    """Canonical form up to level-preserving isomorphism fixing the nodes in ``keep``."""
    memo: dict = {}

    def sig(x):
        if x not in memo:
            memo[x] = (x.level, (1, x) if x in keep else (0,), tuple(sorted(sig(y) for y in p.successors(x))))
        return memo[x]

    return tuple(sorted(sig(x) for x in p.minimal_nodes()))


def _add_leaf(p: Condition, parent: Optional[Node], level: int, tag) -> Condition:
    x = Node(level, tag)
    covers = set(p.covers)
    if parent is not None:
        covers.add((parent, x))
    return Condition(p.nodes | {x}, frozenset(covers))


def _next_tag(p: Condition, level: int) -> int:
    # integral tags stay plain ints: they equal and hash like the matching
    # Fraction, and hash natively, which dominates exhaustive sweeps
    return sum(1 for x in p.nodes if x.level == level)


def _grow(start: Condition, levels: Sequence[int], extra: int, keep: frozenset) -> list:
    """All conditions reached from ``start`` by adding up to ``extra`` leaves on ``levels``."""
    frontier = {condition_signature(start, keep): start}
    out = [start]
    for _ in range(extra):
        nxt: dict = {}
        for p in frontier.values():
            for lv in levels:
                tag = _next_tag(p, lv)
                for par in [None] + sorted(x for x in p.nodes if x.level < lv):
                    q = _add_leaf(p, par, lv, tag)
                    nxt.setdefault(condition_signature(q, keep), q)
        frontier = nxt
        out.extend(frontier[k] for k in sorted(frontier))
    return out


def iter_conditions(max_nodes: int, max_level: int, min_nodes: int = 0) -> Iterator[Condition]:
    """Conditions with at most ``max_nodes`` nodes on levels ``0..max_level-1``."""
    for p in _grow(Condition(frozenset(), frozenset()), range(max_level), max_nodes, frozenset()):
        if len(p) >= min_nodes:
            yield p


def iter_extensions(base: Condition, lo: int, hi: int, max_total: int) -> Iterator[Condition]:
    """Conditions adding nodes on levels ``lo..hi-1`` to ``base``, at most ``max_total`` nodes in all.

    ``base`` must live below ``lo``; its nodes keep their identity.
    """
    extra = max_total - len(base)
    if extra < 0:
        return
    yield from _grow(base, range(lo, hi), extra, frozenset(base.nodes))


def add_node_moves(p: Condition, max_level: int) -> Iterator[Condition]:
    """Every way of adding one node: a level, an immediate predecessor (or none)
    and a set of that predecessor's immediate successors to adopt.

    The new tag is tried below and above the level's existing tags, and
    between each adjacent pair.
    """
    for lv in range(max_level):
        here = sorted(x.tag for x in p.nodes if x.level == lv)
        if here:
            tags = [here[0] - 1] + [Fraction(u + v, 2) for u, v in zip(here, here[1:])] + [here[-1] + 1]
        else:
            tags = [fresh_rational()]
        for par in [None] + sorted(x for x in p.nodes if x.level < lv):
            pool = p.successors(par) if par is not None else p.minimal_nodes()
            pool = sorted(y for y in pool if y.level > lv)
            for r in range(len(pool) + 1):
                for adopt in itertools.combinations(pool, r):
                    for tag in tags:
                        x = Node(lv, tag)
                        covers = set(p.covers) - {(par, y) for y in adopt}
                        covers |= {(x, y) for y in adopt}
                        if par is not None:
                            covers.add((par, x))
                        yield Condition(p.nodes | {x}, frozenset(covers))


# -- normal trees -----------------------------------------------------------------

def _shapes(height: int, counts: Sequence[int]) -> list:
    """Unordered tree shapes of the given height where every non-top node has
    a child count from ``counts``."""
    if height == 1:
        return [()]
    below = _shapes(height - 1, counts)
    out = []
    for k in counts:
        for combo in itertools.combinations_with_replacement(range(len(below)), k):
            out.append(tuple(below[i] for i in combo))
    return out


def iter_normal_trees(max_height: int, child_counts=(2, 3), root_counts=(1, 2)) -> Iterator[LeveledTree]:
    """Normal leveled trees up to isomorphism: every node below the top splits."""
    for h in range(1, max_height + 1):
        shapes = _shapes(h, child_counts)
        for r in root_counts:
            for combo in itertools.combinations_with_replacement(range(len(shapes)), r):
                yield forest_to_tree(tuple(shapes[i] for i in combo))


# -- linear-order instances -----------------------------------------------------------

def iter_interval_sequences(size: int, max_pairs: int) -> Iterator[tuple]:
    """Sequences of disjoint increasing pairs in ``range(size)`` where no earlier
    pair has an endpoint inside the closed interval of a later one."""

    def rec(seq, used):
        yield tuple(seq)
        if len(seq) == max_pairs:
            return
        free = [v for v in range(size) if v not in used]
        for a, b in itertools.combinations(free, 2):
            if any(a <= v <= b for pr in seq for v in pr):
                continue
            yield from rec(seq + [(a, b)], used | {a, b})

    for seq in rec([], frozenset()):
        if seq:
            yield seq


def iter_index_pairs(pairs: Sequence, max_count: int) -> Iterator[tuple]:
    """Lists of (xi, delta) with pair delta strictly inside pair xi, xi < delta,
    and each delta before the next xi."""
    nested = [(i, j) for i in range(len(pairs)) for j in range(i + 1, len(pairs))
              if pairs[i][0] < pairs[j][0] < pairs[j][1] < pairs[i][1]]

    def rec(chosen):
        if chosen:
            yield tuple(chosen)
        if len(chosen) == max_count:
            return
        for ip in nested:
            if not chosen or chosen[-1][1] < ip[0]:
                yield from rec(chosen + [ip])

    yield from rec([])


def random_linear_sequence(rng: random.Random, max_n: int = 3, max_tuples: int = 6):
    """A random order with random pairwise disjoint increasing tuples."""
    n = rng.randint(1, max_n)
    count = rng.randint(0, max_tuples)
    size = n * count + rng.randint(0, 4)
    pool = rng.sample(range(size), n * count)
    tuples = [tuple(sorted(pool[i * n:(i + 1) * n])) for i in range(count)]
    return LinearOrder.range(size), tuples, n


def random_tree_sequence(rng: random.Random, tree: LeveledTree, n: int, count: int) -> list:
    """Injective n-tuples with increasing height, drawn level band by level band."""
    h = tree.height
    out, lo = [], 0
    for _ in range(count):
        if lo >= h:
            break
        levels = sorted(rng.choice(range(lo, h)) for _ in range(n))
        pick = []
        for lv in levels:
            choices = [x for x in tree.level_nodes(lv) if x not in pick]
            if not choices:
                break
            pick.append(rng.choice(choices))
        if len(pick) < n:
            break
        rng.shuffle(pick)
        out.append(tuple(pick))
        lo = max(x.level for x in pick) + 1
    return out
