"""Nodes of the tagged-level universe, finite tree conditions and their order.

A node is a ``(level, tag)`` pair with an exact rational tag.  A condition is
a finite tree on such nodes whose order strictly raises levels.  Conditions
store only their cover relation (the transitive reduction); the full strict
order is recomputed on demand and cached.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Optional

__all__ = [
    "Node",
    "Condition",
    "PreconditionError",
    "as_rational",
    "validate_condition",
    "condition_violations",
    "end_extends",
    "restrict",
    "above",
    "fresh_rational",
    "transitive_closure",
    "transitive_reduction",
    "condition_to_json",
    "condition_from_json",
    "rational_to_json",
    "rational_from_json",
]


class PreconditionError(ValueError):
    """Raised when an operation's hypotheses fail.

    ``violations`` lists every failed clause, not just the first one.
    """

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions, ``"p/q"`` strings and ``(p, q)`` pairs."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, (tuple, list)) and len(value) == 2:
        return Fraction(int(value[0]), int(value[1]))
    raise TypeError(f"cannot read {value!r} as an exact rational")


class Node(NamedTuple):
    level: int
    tag: Fraction

    @classmethod
    def of(cls, level: int, tag) -> "Node":
        if level < 0:
            raise ValueError("levels are natural numbers")
        return cls(int(level), as_rational(tag))

    def __repr__(self):
        return f"({self.level},{self.tag})"


def N(level: int, tag=0) -> Node:
    """Shorthand constructor used heavily in tests."""
    return Node.of(level, tag)


Pair = tuple  # (Node, Node)


def transitive_closure(nodes: Iterable[Node], pairs: Iterable[Pair]) -> dict:
    """Map each node to the frozenset of nodes strictly below it."""
    nodes = set(nodes)
    preds: dict = {x: set() for x in nodes}
    for x, y in pairs:
        preds.setdefault(y, set()).add(x)
        preds.setdefault(x, set())
    below: dict = {}

    # iterative DFS; cycles leave a node in its own lower set
    def lower(x):
        seen = set()
        stack = list(preds[x])
        while stack:
            z = stack.pop()
            if z in seen:
                continue
            seen.add(z)
            if z in below:
                seen |= below[z]
            else:
                stack.extend(preds[z])
        return frozenset(seen)

    for x in sorted(preds):
        below[x] = lower(x)
    return below


def transitive_reduction(below: dict) -> frozenset:
    """Cover pairs of an acyclic strict order given as lower sets."""
    covers = set()
    for y, lows in below.items():
        for x in lows:
            if not any(x in below[z] for z in lows if z != x):
                covers.add((x, y))
    return frozenset(covers)


@dataclass(frozen=True)
class Condition:
    """A finite tree on nodes, stored by its cover relation."""

    nodes: frozenset = field(default_factory=frozenset)
    covers: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "covers", frozenset(tuple(c) for c in self.covers))

    @classmethod
    def from_order(cls, nodes: Iterable[Node], less: Iterable[Pair]) -> "Condition":
        """Build from any generating set of strict relations (closed, then reduced)."""
        nodes = frozenset(nodes)
        less = list(less)
        below = transitive_closure(nodes, less)
        if any(x in below[x] for x in below):
            # cyclic input: keep it verbatim so validation can report it
            return cls(nodes | {v for pr in less for v in pr}, frozenset(less))
        return cls(nodes | set(below), transitive_reduction(below))

    @classmethod
    def chain(cls, *nodes: Node) -> "Condition":
        return cls(frozenset(nodes), frozenset(zip(nodes, nodes[1:])))

    @cached_property
    def below(self) -> dict:
        return transitive_closure(self.nodes, self.covers)

    @cached_property
    def order(self) -> frozenset:
        return frozenset((x, y) for y, lows in self.below.items() for x in lows)

    def less(self, x: Node, y: Node) -> bool:
        return x in self.below.get(y, ())

    def leq(self, x: Node, y: Node) -> bool:
        return x == y or self.less(x, y)

    def comparable(self, x: Node, y: Node) -> bool:
        return x == y or self.less(x, y) or self.less(y, x)

    def predecessor(self, y: Node) -> Optional[Node]:
        """Immediate predecessor, or None for a minimal node."""
        for x, z in self.covers:
            if z == y:
                return x
        return None

    def successors(self, x: Node) -> list:
        return sorted(z for w, z in self.covers if w == x)

    def minimal_nodes(self) -> list:
        return sorted(x for x in self.nodes if not self.below.get(x))

    def sorted_nodes(self) -> list:
        return sorted(self.nodes)

    def levels(self) -> set:
        return {x.level for x in self.nodes}

    def tags(self) -> set:
        return {x.tag for x in self.nodes}

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, x):
        return x in self.nodes

    def __repr__(self):
        cov = ", ".join(f"{a}<{b}" for a, b in sorted(self.covers))
        return f"Condition(nodes={sorted(self.nodes)}, covers=[{cov}])"


def condition_violations(p: Condition) -> list:
    """Every violated condition clause, as human-readable strings."""
    cached = p.__dict__.get("_violations")
    if cached is None:
        cached = p.__dict__["_violations"] = tuple(_violations(p))
    return list(cached)


def _violations(p: Condition) -> list:
    out = []
    for x, y in sorted(p.covers):
        if x not in p.nodes or y not in p.nodes:
            out.append(f"cover {x}<{y} mentions a node outside the node set")
    below = p.below
    cyclic = sorted(x for x in below if x in below[x])
    if cyclic:
        out.append(f"irreflexivity fails at {cyclic}")
    for x, y in sorted(p.covers):
        if x == y:
            out.append(f"cover {x}<{y} is reflexive")
    for y in sorted(below):
        lows = sorted(below[y] - {y})
        for i, x in enumerate(lows):
            for z in lows[i + 1:]:
                if not (x in below[z] or z in below[x]):
                    out.append(f"downward linearity fails below {y}: {x} and {z} incomparable")
    for y in sorted(below):
        for x in sorted(below[y]):
            if x != y and x.level >= y.level:
                out.append(f"level monotonicity fails: {x} < {y}")
    if not cyclic:
        reduced = transitive_reduction(below)
        for pr in sorted(p.covers - reduced):
            if pr[0] != pr[1]:
                out.append(f"cover {pr[0]}<{pr[1]} is redundant (not in the transitive reduction)")
    return out


def validate_condition(p: Condition) -> bool:
    return not condition_violations(p)


def _require_valid(*conds: Condition):
    bad = []
    for c in conds:
        bad.extend(condition_violations(c))
    if bad:
        raise PreconditionError(bad)


def end_extends(q: Condition, p: Condition) -> bool:
    """True iff q contains p and agrees with p on every pair of p-nodes."""
    _require_valid(q, p)
    if not p.nodes <= q.nodes:
        return False
    for x in p.nodes:
        for y in p.nodes:
            if p.less(x, y) != q.less(x, y):
                return False
    return True


def _induced(p: Condition, keep) -> Condition:
    nodes = frozenset(x for x in p.nodes if keep(x))
    return Condition.from_order(nodes, [(x, y) for x, y in p.order if x in nodes and y in nodes])


def _memo_cut(p: Condition, key: tuple, build) -> Condition:
    memo = p.__dict__.setdefault("_cuts", {})
    if key not in memo:
        memo[key] = build()
    return memo[key]


def restrict(p: Condition, alpha: int) -> Condition:
    """Subtree of nodes with level below ``alpha``."""
    return _memo_cut(p, ("below", alpha), lambda: _induced(p, lambda x: x.level < alpha))


def above(p: Condition, alpha: int) -> Condition:
    """Subtree of nodes with level at least ``alpha``."""
    return _memo_cut(p, ("above", alpha), lambda: _induced(p, lambda x: x.level >= alpha))


def fresh_rational(avoid=(), strictly_between=None) -> Fraction:
    """Deterministically pick a rational outside ``avoid``.

    With a bounded pair ``(a, b)`` candidates are tried breadth-first over
    dyadic subdivisions, left to right: 1/2, then 1/4, 3/4, then 1/8, ...
    of the interval.  An open end (``None``) is handled with integer
    offsets away from the closed end; with no pair at all the candidates are
    0, 1, -1, 2, -2, ...
    """
    avoid = {as_rational(v) for v in avoid}
    lo, hi = strictly_between if strictly_between is not None else (None, None)
    lo = None if lo is None else as_rational(lo)
    hi = None if hi is None else as_rational(hi)
    if lo is not None and hi is not None:
        if not lo < hi:
            raise PreconditionError(f"empty interval ({lo}, {hi})")
        depth = 1
        while True:
            width = (hi - lo) / 2**depth
            for j in range(1, 2**depth, 2):
                cand = lo + width * j
                if cand not in avoid:
                    return cand
            depth += 1
    if lo is not None:
        k = 1
        while lo + k in avoid:
            k += 1
        return lo + k
    if hi is not None:
        k = 1
        while hi - k in avoid:
            k += 1
        return hi - k
    k = 0
    while True:
        for cand in ((Fraction(0),) if k == 0 else (Fraction(k), Fraction(-k))):
            if cand not in avoid:
                return cand
        k += 1


# --- JSON -----------------------------------------------------------------

def rational_to_json(q: Fraction) -> list:
    return [q.numerator, q.denominator]


def rational_from_json(obj) -> Fraction:
    return as_rational(obj)


def node_to_json(x: Node) -> list:
    return [x.level, rational_to_json(x.tag)]


def node_from_json(obj) -> Node:
    level, tag = obj
    return Node.of(level, rational_from_json(tag))


def condition_to_json(p: Condition) -> dict:
    nodes = sorted(p.nodes)
    index = {x: i for i, x in enumerate(nodes)}
    covers = sorted([index[x], index[y]] for x, y in p.covers)
    return {"nodes": [node_to_json(x) for x in nodes], "covers": covers}


def condition_from_json(obj) -> Condition:
    nodes = [node_from_json(x) for x in obj["nodes"]]
    covers = [(nodes[i], nodes[j]) for i, j in obj.get("covers", [])]
    return Condition(frozenset(nodes), frozenset(covers))


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, no incidental whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
