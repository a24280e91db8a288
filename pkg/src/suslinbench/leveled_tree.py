"""Finite leveled trees: every node at level k+1 has a parent at level k.

Level 0 may hold several roots.  Tags are exact rationals for base trees and
tuples of tags for derived (tuple) trees; within a level nodes are ordered by
tag, and globally by ``(level, tag)``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from . import kernels
from .order_core import Node, PreconditionError, as_rational

__all__ = [
    "LeveledTree",
    "PerfectBinaryTree",
    "NormalityReport",
    "delta",
    "projection",
    "check_normal",
    "max_chain",
    "max_antichain",
    "derived_power",
    "derived_at",
    "cone_tuples",
    "split_embedding",
    "dense_below",
    "build_pseudo_generic",
    "full_tree",
    "path_tree",
    "tree_to_json",
    "tree_from_json",
    "tag_to_json",
    "tag_from_json",
]


@dataclass(frozen=True)
class LeveledTree:
    """Materialized leveled tree.

    ``levels[k]`` is the sorted tuple of tags on level k and ``parent_pairs``
    the sorted tuple of ``(child, parent)`` node pairs.
    """

    levels: tuple
    parent_pairs: tuple

    def __post_init__(self):
        levels = tuple(tuple(sorted(set(lv))) for lv in self.levels)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "parent_pairs", tuple(sorted(tuple(p) for p in self.parent_pairs)))
        bad = []
        for k, lv in enumerate(levels):
            if not lv:
                bad.append(f"level {k} is empty")
        seen = {}
        for child, par in self.parent_pairs:
            if child in seen:
                bad.append(f"{child} has two parents")
            seen[child] = par
            if child.level != par.level + 1:
                bad.append(f"parent {par} of {child} is not one level down")
        nodes = {Node(k, t) for k, lv in enumerate(levels) for t in lv}
        for child, par in self.parent_pairs:
            if child not in nodes or par not in nodes:
                bad.append(f"parent link {child}->{par} leaves the tree")
        for x in nodes:
            if x.level > 0 and x not in seen:
                bad.append(f"{x} has no parent")
        if bad:
            raise PreconditionError(bad)

    @classmethod
    def from_parents(cls, levels: Iterable[Iterable], parent: dict) -> "LeveledTree":
        return cls(tuple(tuple(lv) for lv in levels), tuple(parent.items()))

    # -- structure ----------------------------------------------------------

    @property
    def height(self) -> int:
        return len(self.levels)

    @cached_property
    def nodes(self) -> list:
        return [Node(k, t) for k, lv in enumerate(self.levels) for t in lv]

    @cached_property
    def index(self) -> dict:
        return {x: i for i, x in enumerate(self.nodes)}

    @cached_property
    def parent(self) -> dict:
        return dict(self.parent_pairs)

    @cached_property
    def _children(self) -> dict:
        out = {x: [] for x in self.nodes}
        for child, par in self.parent_pairs:
            out[par].append(child)
        for v in out.values():
            v.sort()
        return out

    @cached_property
    def arrays(self):
        """(level, parent, rank, anc) index arrays for the kernels."""
        idx = self.index
        level = np.array([x.level for x in self.nodes], dtype=np.int32)
        parent = np.array([idx[self.parent[x]] if x.level else -1 for x in self.nodes], dtype=np.int32)
        rank = np.array([self.levels[x.level].index(x.tag) for x in self.nodes], dtype=np.int32)
        anc = kernels.ancestor_table(level, parent, self.height)
        return level, parent, rank, anc

    @cached_property
    def _paths(self) -> dict:
        out = {}
        for x in self.nodes:
            out[x] = (out[self.parent[x]] + (x,)) if x.level else (x,)
        return out

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, x):
        return x in self.index

    def level_nodes(self, k: int) -> list:
        return [Node(k, t) for t in self.levels[k]]

    def roots(self) -> list:
        return self.level_nodes(0) if self.levels else []

    def children(self, x: Node) -> list:
        return self._children[x]

    def parent_of(self, x: Node) -> Optional[Node]:
        return self.parent.get(x)

    def path(self, x: Node) -> tuple:
        """Ancestors of ``x`` from level 0 up to ``x`` itself."""
        self._check(x)
        return self._paths[x]

    def leq(self, x: Node, y: Node) -> bool:
        return x.level <= y.level and self.path(y)[x.level] == x

    def less(self, x: Node, y: Node) -> bool:
        return x != y and self.leq(x, y)

    def comparable(self, x: Node, y: Node) -> bool:
        return self.leq(x, y) or self.leq(y, x)

    def cone(self, x: Node) -> list:
        """All nodes at or above ``x``."""
        out, stack = [], [x]
        while stack:
            z = stack.pop()
            out.append(z)
            stack.extend(self.children(z))
        return sorted(out)

    def _check(self, *xs):
        for x in xs:
            if x not in self.index:
                raise PreconditionError(f"{x} is not a node of the tree")


class PerfectBinaryTree:
    """Implicit complete binary tree of any height, never materialized.

    Node ``i`` of level ``k`` (``0 <= i < 2**k``) carries the integer tag
    ``i XOR mask[k]``, with seeded masks, so sibling order varies with the
    seed.  Being complete, it is normal.
    """

    def __init__(self, height: int, seed: int = 0):
        if height < 1:
            raise PreconditionError("height must be at least 1")
        self.height = height
        rng = random.Random(seed)
        self._mask = [rng.getrandbits(k) if k else 0 for k in range(height)]

    def _pos(self, x: Node) -> int:
        return int(x.tag) ^ self._mask[x.level]

    def _node(self, level: int, pos: int) -> Node:
        return Node(level, Fraction(pos ^ self._mask[level]))

    def __contains__(self, x) -> bool:
        return (0 <= x.level < self.height and x.tag.denominator == 1
                and 0 <= self._pos(x) < 2**x.level)

    def roots(self) -> list:
        return [self._node(0, 0)]

    def children(self, x: Node) -> list:
        if x.level + 1 >= self.height:
            return []
        p = self._pos(x)
        return sorted(self._node(x.level + 1, 2 * p + b) for b in (0, 1))

    def parent_of(self, x: Node) -> Optional[Node]:
        return self._node(x.level - 1, self._pos(x) >> 1) if x.level else None

    def path(self, x: Node) -> tuple:
        p = self._pos(x)
        return tuple(self._node(k, p >> (x.level - k)) for k in range(x.level + 1))

    def leq(self, x: Node, y: Node) -> bool:
        return x.level <= y.level and (self._pos(y) >> (y.level - x.level)) == self._pos(x)

    def less(self, x: Node, y: Node) -> bool:
        return x != y and self.leq(x, y)

    def comparable(self, x: Node, y: Node) -> bool:
        return self.leq(x, y) or self.leq(y, x)


# -- basic operations ------------------------------------------------------

def delta(t, x: Node, y: Node) -> int:
    """Size of the common lower set {z : z <= x and z <= y}."""
    px, py = t.path(x), t.path(y)
    k = 0
    while k < len(px) and k < len(py) and px[k] == py[k]:
        k += 1
    return k


def projection(t, x: Node, beta: int) -> Node:
    if not 0 <= beta <= x.level:
        raise PreconditionError(f"level {beta} is above {x}")
    return t.path(x)[beta]


class NormalityReport(NamedTuple):
    splitting_failures: list
    extension_failures: list

    @property
    def normal(self) -> bool:
        return not self.splitting_failures and not self.extension_failures


def check_normal(t: LeveledTree) -> NormalityReport:
    """Finite normality: below the top level every node splits and extends.

    The limit-level clause has no finite content and is treated as holding.
    """
    split, ext = [], []
    for x in t.nodes:
        if x.level + 1 >= t.height:
            continue
        k = len(t.children(x))
        if k < 2:
            split.append(x)
        if k == 0:
            ext.append(x)
    return NormalityReport(split, ext)


def max_chain(t: LeveledTree) -> list:
    """A longest chain: the root path of a deepest node, least by (level, tag)."""
    if not t.nodes:
        return []
    return list(min((t.path(x) for x in t.nodes), key=lambda p: (-len(p), p)))


def _lex_less(s: list, u: list) -> bool:
    """For equal-size sorted lists: least element of the symmetric difference lies in s."""
    diff = set(s) ^ set(u)
    return bool(diff) and min(diff) in s


def max_antichain(t: LeveledTree) -> list:
    """A largest antichain, least by sorted (level, tag) sequence among ties.

    Bottom-up over levels: a node's best is itself or the union of its
    children's bests.  Children's cones are disjoint, and comparing
    equal-size sets by their least differing element is compatible with
    disjoint unions, so local tie-breaks give the global least.
    """
    best: dict = {}
    for k in range(t.height - 1, -1, -1):
        for x in t.level_nodes(k):
            union = sorted(z for c in t.children(x) for z in best[c])
            if len(union) > 1 or (len(union) == 1 and _lex_less(union, [x])):
                best[x] = union
            else:
                best[x] = [x]
    return sorted(z for r in t.roots() for z in best[r])


# -- derived trees ---------------------------------------------------------

def _same_level(vec: Sequence[Node]) -> int:
    levels = {x.level for x in vec}
    if len(levels) != 1:
        raise PreconditionError("tuple entries are not all on one level")
    return levels.pop()


def cone_tuples(t: LeveledTree, base: Sequence[Node]) -> dict:
    """Level k (relative to the base) -> same-level tuples componentwise >= base."""
    base = tuple(base)
    out = {0: [base]}
    k = 0
    while True:
        nxt = [tuple(v) for tup in out[k] for v in itertools.product(*(t.children(x) for x in tup))]
        if not nxt:
            return out
        k += 1
        out[k] = sorted(nxt)


def derived_power(t: LeveledTree, n: int) -> LeveledTree:
    """Same-level n-tuples under the componentwise order."""
    if n < 1:
        raise PreconditionError("arity must be positive")
    levels, parent = [], {}
    for k in range(t.height):
        tuples = list(itertools.product(t.level_nodes(k), repeat=n))
        levels.append([tuple(x.tag for x in tup) for tup in tuples])
        if k:
            for tup in tuples:
                parent[Node(k, tuple(x.tag for x in tup))] = Node(
                    k - 1, tuple(t.parent[x].tag for x in tup))
    return LeveledTree.from_parents(levels, parent)


def derived_at(t: LeveledTree, base: Sequence[Node]) -> LeveledTree:
    """Tuples componentwise at or above an injective base, re-leveled from 0."""
    base = tuple(base)
    t._check(*base)
    _same_level(base)
    if len(set(base)) != len(base):
        raise PreconditionError("base tuple is not injective")
    layers = cone_tuples(t, base)
    levels, parent = [], {}
    for k in range(len(layers)):
        levels.append([tuple(x.tag for x in tup) for tup in layers[k]])
        if k:
            for tup in layers[k]:
                parent[Node(k, tuple(x.tag for x in tup))] = Node(
                    k - 1, tuple(t.parent[x].tag for x in tup))
    return LeveledTree.from_parents(levels, parent)


def _tuple_leq(t, u: tuple, v: tuple) -> bool:
    return all(t.leq(x, y) for x, y in zip(u, v))


def split_embedding(t: LeveledTree, base: Sequence[Node], m: int) -> dict:
    """Check that splitting tuples after position m densely embeds the derived tree.

    The map sends ``(b_0..b_{n-1})`` to ``((b_0..b_m), (b_{m+1}..b_{n-1}))``
    inside the product of the two smaller derived trees.  Reports any pair
    where order is not preserved and reflected, and any product element
    with no image above it.
    """
    base = tuple(base)
    n = len(base)
    if n < 2 or not 0 <= m < n - 1:
        raise PreconditionError(f"need arity >= 2 and 0 <= m < n-1 (n={n}, m={m})")
    t._check(*base)
    _same_level(base)
    if len(set(base)) != n:
        raise PreconditionError("base tuple is not injective")
    src = [tup for layer in cone_tuples(t, base).values() for tup in layer]
    left = [tup for layer in cone_tuples(t, base[: m + 1]).values() for tup in layer]
    right = [tup for layer in cone_tuples(t, base[m + 1:]).values() for tup in layer]

    def image(b):
        return b[: m + 1], b[m + 1:]

    order_violations = []
    for u in src:
        iu = image(u)
        for v in src:
            iv = image(v)
            lhs = _tuple_leq(t, u, v)
            rhs = _tuple_leq(t, iu[0], iv[0]) and _tuple_leq(t, iu[1], iv[1])
            if lhs != rhs:
                order_violations.append([u, v])
    images = [image(b) for b in src]
    density_violations = []
    for c in left:
        for d in right:
            if not any(_tuple_leq(t, c, e) and _tuple_leq(t, d, f) for e, f in images):
                density_violations.append([c, d])
    return {
        "source_size": len(src),
        "order_violations": order_violations,
        "density_violations": density_violations,
    }


def dense_below(t: LeveledTree, targets: Iterable[Node]) -> Optional[Node]:
    """Lowest node (least tag on ties) whose whole cone reaches ``targets``.

    Every node b at or above the answer has some target at or above b.
    """
    targets = set(targets)
    reach, dense = {}, {}
    for k in range(t.height - 1, -1, -1):
        for x in t.level_nodes(k):
            kids = t.children(x)
            reach[x] = x in targets or any(reach[c] for c in kids)
            dense[x] = reach[x] and all(dense[c] for c in kids)
    for x in t.nodes:
        if dense[x]:
            return x
    return None


# -- builders ----------------------------------------------------------------

def _distinct_tags(rng: random.Random, count: int) -> list:
    tags = set()
    span = max(4, 2 * count)
    while len(tags) < count:
        tags.add(Fraction(rng.randint(-span, span), rng.randint(1, 4)))
    return sorted(tags)


def build_pseudo_generic(height: int, widths: Optional[Sequence[int]] = None,
                         seed: int = 0) -> LeveledTree:
    """Seeded normal leveled tree with the scheduled level widths.

    Every non-top node first receives two children, and the remaining nodes
    of the next level are attached to seeded random parents.  The default
    schedule doubles: 1, 2, 4, ...
    """
    if height < 1:
        raise PreconditionError("height must be at least 1")
    widths = list(widths) if widths is not None else [2**k for k in range(height)]
    if len(widths) != height:
        raise PreconditionError(f"width schedule has {len(widths)} entries for height {height}")
    bad = []
    if widths[0] < 1:
        bad.append("level 0 must be nonempty")
    for k in range(1, height):
        if widths[k] < 2:
            bad.append(f"width {widths[k]} at level {k} is below 2")
        if widths[k] < 2 * widths[k - 1]:
            bad.append(f"level {k} has {widths[k]} nodes, splitting needs {2 * widths[k - 1]}")
    if bad:
        raise PreconditionError(bad)
    rng = random.Random(seed)
    levels = [_distinct_tags(rng, w) for w in widths]
    parent = {}
    for k in range(1, height):
        below = [Node(k - 1, q) for q in levels[k - 1]]
        here = [Node(k, q) for q in levels[k]]
        rng.shuffle(here)
        owners = below + below + [rng.choice(below) for _ in range(len(here) - 2 * len(below))]
        for x, par in zip(here, owners):
            parent[x] = par
    return LeveledTree.from_parents(levels, parent)


def full_tree(height: int, branching: int = 2, roots: int = 1) -> LeveledTree:
    """Complete tree with integer tags 0, 1, ... in left-to-right order."""
    levels = [list(range(roots * branching**k)) for k in range(height)]
    parent = {Node(k, Fraction(i)): Node(k - 1, Fraction(i // branching))
              for k in range(1, height) for i in levels[k]}
    return LeveledTree.from_parents([[Fraction(i) for i in lv] for lv in levels], parent)


def path_tree(height: int, roots: int = 1) -> LeveledTree:
    """``roots`` disjoint unsplit paths of the given height."""
    levels = [[Fraction(i) for i in range(roots)] for _ in range(height)]
    parent = {Node(k, Fraction(i)): Node(k - 1, Fraction(i))
              for k in range(1, height) for i in range(roots)}
    return LeveledTree.from_parents(levels, parent)


# -- JSON --------------------------------------------------------------------

def tag_to_json(tag):
    if isinstance(tag, tuple):
        return [tag_to_json(v) for v in tag]
    return [tag.numerator, tag.denominator]


def tag_from_json(obj):
    if obj and isinstance(obj[0], list):
        return tuple(tag_from_json(v) for v in obj)
    return as_rational(obj)


def tree_to_json(t: LeveledTree) -> dict:
    idx = t.index
    return {
        "height": t.height,
        "levels": [[tag_to_json(q) for q in lv] for lv in t.levels],
        "parent": sorted([idx[c], idx[p]] for c, p in t.parent_pairs),
    }


def tree_from_json(obj) -> LeveledTree:
    levels = [[tag_from_json(q) for q in lv] for lv in obj["levels"]]
    if "height" in obj and obj["height"] != len(levels):
        raise PreconditionError("height field disagrees with the level list")
    nodes = [Node(k, q) for k, lv in enumerate(levels) for q in sorted(lv)]
    parent = {nodes[c]: nodes[p] for c, p in obj.get("parent", [])}
    return LeveledTree.from_parents(levels, parent)
