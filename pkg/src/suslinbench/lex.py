"""Lexicographic linear order of a leveled tree, and finite linear orders.

Tree order decides comparable nodes.  Incomparable nodes are decided at
their branch point: the two distinct successors of the last common node are
compared by tag.  Nodes with different roots compare their root tags, as if
a virtual root sat below level 0.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from enum import IntEnum
from typing import Hashable, Iterable, Optional, Sequence

from . import kernels
from .leveled_tree import LeveledTree, delta, projection
from .order_core import Condition, Node, PreconditionError, _require_valid

__all__ = [
    "Ordering",
    "LexOrder",
    "lex_compare",
    "lex_sorted",
    "lex_matrix",
    "order_axiom_violations",
    "meet_height_violations",
    "complete_condition",
    "check_sibling_witness",
    "LinearOrder",
    "DoubledOrder",
    "double",
    "doubling_witness",
    "classify_pair_relation",
]


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@dataclass(frozen=True)
class LexOrder:
    tree: LeveledTree


def _tree(s) -> LeveledTree:
    return s.tree if isinstance(s, LexOrder) else s


def lex_compare(s, a: Node, b: Node) -> Ordering:
    t = _tree(s)
    t._check(a, b)
    if a == b:
        return Ordering.EQUAL
    if t.leq(a, b):
        return Ordering.LESS
    if t.leq(b, a):
        return Ordering.GREATER
    gamma = delta(t, a, b) - 1
    y = projection(t, a, gamma + 1)
    z = projection(t, b, gamma + 1)
    return Ordering.LESS if y.tag < z.tag else Ordering.GREATER


def lex_sorted(s) -> list:
    """Nodes in ascending lexicographic order: a preorder walk by tag."""
    t = _tree(s)
    out, stack = [], list(reversed(t.roots()))
    while stack:
        x = stack.pop()
        out.append(x)
        stack.extend(reversed(t.children(x)))
    return out


def lex_matrix(s):
    """All-pairs comparison matrix (int8, -1/0/1) in node-index order."""
    level, _, rank, anc = _tree(s).arrays
    return kernels.lex_matrix(level, rank, anc)


def order_axiom_violations(s, limit: int = 100) -> list:
    """Trichotomy failures ``("trichotomy", a, b)`` and transitivity failures
    ``("transitivity", a, b, c)`` of the lex comparison."""
    t = _tree(s)
    raw = kernels.order_violations(lex_matrix(t), limit)
    nodes = t.nodes
    out = []
    for kind, a, b, c in raw:
        if kind == 0:
            out.append(("trichotomy", nodes[a], nodes[b]))
        else:
            out.append(("transitivity", nodes[a], nodes[b], nodes[c]))
    return out


def meet_height_violations(s, limit: int = 100) -> list:
    """Quadruples (a, b, c, d) with c strictly lower than a and b, a <_S c <_S b,
    and d a common lower bound of a and b not strictly below c's level.

    Always empty for a correct lex order; a non-empty result is a bug.
    """
    t = _tree(s)
    level, _, _, anc = t.arrays
    raw = kernels.meet_violations(lex_matrix(t), level, anc, limit)
    nodes = t.nodes
    return [tuple(nodes[i] for i in quad) for quad in raw]


# -- completions of a condition ---------------------------------------------

def complete_condition(p: Condition, seed: int = 0, extra_levels: Optional[int] = None,
                       max_width: int = 6) -> LeveledTree:
    """A seeded leveled tree containing p whose tree order extends p's order exactly.

    Gaps between a node and its immediate predecessor are filled by a private
    chain of fresh nodes, so nodes incomparable in p stay incomparable.
    Further random filler nodes are then scattered on every level.
    """
    _require_valid(p)
    rng = random.Random(seed)
    top = max((x.level for x in p.nodes), default=-1)
    if extra_levels is None:
        extra_levels = rng.randint(0, 1)
    height = top + 1 + extra_levels
    if height < 1:
        height = 1
    levels = {k: {x.tag for x in p.nodes if x.level == k} for k in range(height)}
    parent: dict = {}

    # filler tags are plain ints: only their order against p's tags matters
    def fresh(k):
        span = 4 * (len(levels[k]) + 2)
        while True:
            q = rng.randint(-span, span)
            if q not in levels[k]:
                levels[k].add(q)
                return Node(k, q)

    for y in sorted(p.nodes):
        if y.level == 0:
            continue
        x = p.predecessor(y)
        start = x.level + 1 if x is not None else 0
        prev = x
        for k in range(start, y.level):
            z = fresh(k)
            if prev is not None:
                parent[z] = prev
            prev = z
        parent[y] = prev
    for k in range(height):
        if not levels[k]:
            z = fresh(k)
            if k:
                parent[z] = Node(k - 1, rng.choice(sorted(levels[k - 1])))
    for k in range(height):
        for _ in range(rng.randint(0, max(0, max_width - len(levels[k])))):
            z = fresh(k)
            if k:
                parent[z] = Node(k - 1, rng.choice(sorted(levels[k - 1])))
    return LeveledTree.from_parents([sorted(levels[k]) for k in range(height)], parent)


def _sibling_violations(p: Condition, config) -> list:
    x, y, z, a, b = config
    out = []
    if len({x, y, z, a, b}) != 5:
        out.append("the five nodes are not distinct")
    for v in (x, y, z, a, b):
        if v not in p.nodes:
            out.append(f"{v} is not in the condition")
    if out:
        return out
    if not (p.less(x, y) and p.less(y, a)):
        out.append("x < y < a fails")
    if not (p.less(x, z) and p.less(z, b)):
        out.append("x < z < b fails")
    if not (y.level == z.level == x.level + 1):
        out.append("y and z are not on the level right above x")
    if not y.tag < z.tag:
        out.append("tag of y is not below tag of z")
    return out


def check_sibling_witness(p: Condition, config, completions: int = 32, seed: int = 0) -> bool:
    """Sample completions of p and confirm a <_S b in each.

    ``config`` is ``(x, y, z, a, b)`` with y, z successors of x on the next
    level, y tagged below z, y under a and z under b.
    """
    _require_valid(p)
    config = tuple(config)
    bad = _sibling_violations(p, config)
    if bad:
        raise PreconditionError(bad)
    _, _, _, a, b = config
    rng = random.Random(seed)
    for _ in range(completions):
        t = complete_condition(p, seed=rng.getrandbits(32))
        if lex_compare(t, a, b) != Ordering.LESS:
            return False
    return True


# -- finite linear orders ----------------------------------------------------

class LinearOrder:
    """A finite linear order given by its elements in ascending order."""

    def __init__(self, elements: Iterable[Hashable]):
        self.elements = tuple(elements)
        self.rank = {x: i for i, x in enumerate(self.elements)}
        if len(self.rank) != len(self.elements):
            raise PreconditionError("linear order lists an element twice")

    @classmethod
    def range(cls, n: int) -> "LinearOrder":
        return cls(range(n))

    def less(self, x, y) -> bool:
        return self.rank[x] < self.rank[y]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.rank

    def __eq__(self, other):
        return isinstance(other, LinearOrder) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"LinearOrder({list(self.elements)!r})"


class DoubledOrder(LinearOrder):
    """``base x {0, 1}`` ordered by base first, then bit 0 before bit 1."""

    def __init__(self, base: LinearOrder):
        self.base = base
        super().__init__((a, bit) for a in base for bit in (0, 1))


def double(base) -> DoubledOrder:
    if not isinstance(base, LinearOrder):
        base = LinearOrder(base)
    if not len(base):
        raise PreconditionError("base order is empty")
    return DoubledOrder(base)


def doubling_witness(base) -> list:
    """The pairs ((a, 0), (a, 1)) for every base element a."""
    m = double(base)
    return [((a, 0), (a, 1)) for a in m.base]


def classify_pair_relation(order: LinearOrder, pair1: Sequence, pair2: Sequence) -> str:
    """Place two increasing pairs relative to each other.

    ``before``/``after`` are disjoint intervals; ``nested`` means the second
    interval sits strictly inside the first; ``touching`` means they share an
    endpoint; every other overlap, including the first interval inside the
    second, is ``crossing``.
    """
    a, b = pair1
    c, d = pair2
    lt = order.less
    if not (lt(a, b) and lt(c, d)):
        raise PreconditionError("pairs must be increasing")
    if b == c or d == a:
        return "touching"
    if len({a, b, c, d}) != 4:
        raise PreconditionError("pairs share an element other than a touching endpoint")
    if lt(b, c):
        return "before"
    if lt(d, a):
        return "after"
    if lt(a, c) and lt(d, b):
        return "nested"
    return "crossing"
