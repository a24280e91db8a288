"""Types, satisfaction and realization for tuple sequences in linear orders and trees."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .leveled_tree import delta, projection
from .lex import LinearOrder
from .order_core import Node, PreconditionError

__all__ = [
    "parse_type",
    "format_type",
    "complement",
    "LinearTupleSequence",
    "TreeTupleSequence",
    "satisfies_linear",
    "realize_linear",
    "check_separated",
    "satisfies_tree",
    "realize_tree",
    "delta_bound",
    "project_and_group",
    "section4_counterexample",
    "nested_triples",
    "sigma_reduce",
]


def parse_type(g) -> tuple:
    """``"101"``, ``[1, 0, 1]`` or ``(1, 0, 1)`` -> ``(1, 0, 1)``."""
    if isinstance(g, str):
        g = [ch for ch in g.strip() if ch not in ", "]
    try:
        g = tuple(int(v) for v in g)
    except (TypeError, ValueError):
        raise PreconditionError(f"type {g!r} is not a nonempty 0/1 vector") from None
    if not g or any(v not in (0, 1) for v in g):
        raise PreconditionError(f"type {g!r} is not a nonempty 0/1 vector")
    return g


def format_type(g) -> str:
    return "".join(str(v) for v in g)


def complement(g) -> tuple:
    return tuple(1 - v for v in parse_type(g))


@dataclass(frozen=True)
class LinearTupleSequence:
    """Pairwise disjoint n-tuples from a finite linear order, increasing unless
    ``increasing`` is False (coordinate permutations break it)."""

    order: LinearOrder
    tuples: tuple
    increasing: bool = True

    def __post_init__(self):
        tuples = tuple(tuple(t) for t in self.tuples)
        object.__setattr__(self, "tuples", tuples)
        bad = []
        arities = {len(t) for t in tuples}
        if len(arities) > 1:
            bad.append("tuples have different arities")
        for k, t in enumerate(tuples):
            for v in t:
                if v not in self.order:
                    bad.append(f"tuple {k} mentions {v!r} outside the order")
            if self.increasing and any(not self.order.less(u, v) for u, v in zip(t, t[1:])
                                       if u in self.order and v in self.order):
                bad.append(f"tuple {k} is not increasing")
        for i in range(len(tuples)):
            for j in range(i + 1, len(tuples)):
                if set(tuples[i]) & set(tuples[j]):
                    bad.append(f"tuples {i} and {j} are not disjoint")
        if bad:
            raise PreconditionError(bad)

    @property
    def n(self) -> int:
        return len(self.tuples[0]) if self.tuples else 0

    def __len__(self):
        return len(self.tuples)


@dataclass(frozen=True)
class TreeTupleSequence:
    """Injective n-tuples of tree nodes, optionally with increasing height or a base tuple."""

    tree: object
    tuples: tuple
    base: Optional[tuple] = None
    increasing: bool = False

    def __post_init__(self):
        tuples = tuple(tuple(t) for t in self.tuples)
        object.__setattr__(self, "tuples", tuples)
        if self.base is not None:
            object.__setattr__(self, "base", tuple(self.base))
        bad = []
        if len({len(t) for t in tuples}) > 1:
            bad.append("tuples have different arities")
        for k, t in enumerate(tuples):
            for v in t:
                if v not in self.tree:
                    bad.append(f"tuple {k} mentions {v} outside the tree")
            if len(set(t)) != len(t):
                bad.append(f"tuple {k} is not injective")
        if self.increasing:
            for k in range(len(tuples) - 1):
                if max(v.level for v in tuples[k]) >= min(v.level for v in tuples[k + 1]):
                    bad.append(f"tuples {k} and {k + 1} do not have increasing height")
        if self.base is not None and not bad:
            if len({v.level for v in self.base}) != 1 or len(set(self.base)) != len(self.base):
                bad.append("base is not an injective same-level tuple")
            for k, t in enumerate(tuples):
                if len(t) != len(self.base) or not all(self.tree.less(c, a) for c, a in zip(self.base, t)):
                    bad.append(f"tuple {k} is not strictly above the base")
        if bad:
            raise PreconditionError(bad)

    @property
    def n(self) -> int:
        return len(self.tuples[0]) if self.tuples else 0

    def __len__(self):
        return len(self.tuples)


# -- linear orders -------------------------------------------------------------

def satisfies_linear(order: LinearOrder, first: Sequence, second: Sequence, g) -> bool:
    g = parse_type(g)
    if not (len(first) == len(second) == len(g)):
        raise PreconditionError("tuple arities do not match the type")
    return all(order.less(u, v) == bool(bit) for u, v, bit in zip(first, second, g))


def realize_linear(seq: LinearTupleSequence, g) -> Optional[tuple]:
    """Least index pair (xi, delta), xi != delta, whose tuples satisfy g."""
    g = parse_type(g)
    ts = seq.tuples
    for i in range(len(ts)):
        for j in range(len(ts)):
            if i != j and satisfies_linear(seq.order, ts[i], ts[j], g):
                return (i, j)
    return None


def check_separated(seq: LinearTupleSequence, witness: Optional[Sequence] = None) -> Optional[tuple]:
    """A separator vector c_0..c_{n-2} with a[i] < c_i < a[i+1] in every tuple.

    A supplied witness is checked; otherwise the least separator in each gap
    is searched for.  Returns None when no separator exists.
    """
    order, ts, n = seq.order, seq.tuples, seq.n
    if not ts:
        return () if witness is None else tuple(witness)

    def fits(i, c):
        return all(order.less(t[i], c) and order.less(c, t[i + 1]) for t in ts)

    if witness is not None:
        witness = tuple(witness)
        if len(witness) != n - 1:
            return None
        ok = all(c in order and fits(i, c) for i, c in enumerate(witness))
        return witness if ok else None
    out = []
    for i in range(n - 1):
        found = next((c for c in order if fits(i, c)), None)
        if found is None:
            return None
        out.append(found)
    return tuple(out)


# -- trees -----------------------------------------------------------------------

def satisfies_tree(tree, first: Sequence[Node], second: Sequence[Node], g) -> bool:
    """Componentwise: first[i] below second[i] exactly where g is 1.

    Only defined when every node of ``second`` is higher than every node of
    ``first``.
    """
    g = parse_type(g)
    if not (len(first) == len(second) == len(g)):
        raise PreconditionError("tuple arities do not match the type")
    if max(v.level for v in first) >= min(v.level for v in second):
        raise PreconditionError("second tuple is not strictly higher than the first")
    return all(tree.less(u, v) == bool(bit) for u, v, bit in zip(first, second, g))


def realize_tree(seq: TreeTupleSequence, g) -> Optional[tuple]:
    """Least pair xi < beta satisfying g; the sequence must have increasing height."""
    g = parse_type(g)
    ts = seq.tuples
    for k in range(len(ts) - 1):
        if max(v.level for v in ts[k]) >= min(v.level for v in ts[k + 1]):
            raise PreconditionError(f"tuples {k} and {k + 1} do not have increasing height")
    for i in range(len(ts)):
        for j in range(i + 1, len(ts)):
            if satisfies_tree(seq.tree, ts[i], ts[j], g):
                return (i, j)
    return None


def delta_bound(seq: TreeTupleSequence) -> int:
    """Largest meet size between two entries of one tuple (0 if there are none)."""
    best = 0
    for t in seq.tuples:
        for i in range(len(t)):
            for j in range(i + 1, len(t)):
                best = max(best, delta(seq.tree, t[i], t[j]))
    return best


def project_and_group(seq: TreeTupleSequence, level: int) -> list:
    """Group tuples by their projection to ``level``; thin each group to increasing height.

    Returns ``[(base, TreeTupleSequence), ...]`` ordered by base.  The
    thinning is greedy by ascending lowest node; tuples with an entry on
    ``level`` itself cannot sit strictly above their base and are dropped.
    """
    bad = []
    for k, t in enumerate(seq.tuples):
        if any(v.level < level for v in t):
            bad.append(f"tuple {k} has a node below level {level}")
        for i in range(len(t)):
            for j in range(i + 1, len(t)):
                if delta(seq.tree, t[i], t[j]) >= level:
                    bad.append(f"tuple {k} has entries meeting at or above level {level}")
    if bad:
        raise PreconditionError(bad)
    groups: dict = {}
    for t in seq.tuples:
        base = tuple(projection(seq.tree, v, level) for v in t)
        if len(set(base)) != len(base):
            raise AssertionError("projection below the meet bound is not injective")
        groups.setdefault(base, []).append(t)
    out = []
    for base in sorted(groups):
        members = sorted((t for t in groups[base] if min(v.level for v in t) > level),
                         key=lambda t: (min(v.level for v in t), max(v.level for v in t)))
        kept, ceiling = [], -1
        for t in members:
            if min(v.level for v in t) > ceiling:
                kept.append(t)
                ceiling = max(v.level for v in t)
        out.append((base, TreeTupleSequence(seq.tree, tuple(kept), base=base, increasing=True)))
    return out


# -- counterexample constructions ----------------------------------------------------

def section4_counterexample(tree, k: int, seed: int = 0) -> TreeTupleSequence:
    """Pairs (y_i, z_i) of incomparable successors of x_i, stacked so each x_j
    sits above every earlier pair.  Such a sequence never realizes (1, 1).

    ``x_i`` lives on level 3i, chosen by a seeded climb from a random earlier
    y or z.
    """
    if k < 1:
        raise PreconditionError("k must be positive")
    if tree.height < 3 * k:
        raise PreconditionError(f"height {tree.height} is too small for {k} triples")
    rng = random.Random(seed)
    pairs = []
    prev = None
    for i in range(k):
        if prev is None:
            cands = list(tree.roots())
            x = rng.choice(cands)
        else:
            x = rng.choice(prev)
        while x.level < 3 * i:
            kids = tree.children(x)
            if not kids:
                raise PreconditionError(f"{x} does not extend to level {3 * i}")
            x = rng.choice(kids)
        kids = tree.children(x)
        if len(kids) < 2:
            raise PreconditionError(f"{x} does not split")
        y, z = sorted(rng.sample(kids, 2))
        pairs.append((y, z))
        prev = [y, z]
    return TreeTupleSequence(tree, tuple(pairs), increasing=True)


def nested_triples(order: LinearOrder, pairs: Sequence, index_pairs: Sequence) -> LinearTupleSequence:
    """Triples (a_xi, a_delta, b_xi) from nested interval pairs; never realizes (1, 0, 1).

    ``pairs`` must be pairwise disjoint increasing pairs in which no earlier
    pair has an endpoint inside the closed interval of a later one.
    ``index_pairs`` lists (xi_i, delta_i) with a_xi < a_delta < b_delta < b_xi
    and delta_i < xi_j for i < j.
    """
    pairs = [tuple(p) for p in pairs]
    index_pairs = [tuple(ip) for ip in index_pairs]
    lt = order.less
    bad = []
    for k, (a, b) in enumerate(pairs):
        if not lt(a, b):
            bad.append(f"pair {k} is not increasing")
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            if set(pairs[i]) & set(pairs[j]):
                bad.append(f"pairs {i} and {j} are not disjoint")
    for later in range(len(pairs)):
        lo, hi = pairs[later]
        for earlier in range(later):
            for v in pairs[earlier]:
                if not (lt(v, lo) or lt(hi, v)):
                    bad.append(f"pair {earlier} has an endpoint inside the interval of pair {later}")
    for i, (xi, de) in enumerate(index_pairs):
        if not (0 <= xi < de < len(pairs)):
            bad.append(f"index pair {i} is not an increasing pair of indices")
            continue
        (a_x, b_x), (a_d, b_d) = pairs[xi], pairs[de]
        if not (lt(a_x, a_d) and lt(a_d, b_d) and lt(b_d, b_x)):
            bad.append(f"index pair {i} is not nested")
    for i in range(len(index_pairs) - 1):
        if not index_pairs[i][1] < index_pairs[i + 1][0]:
            bad.append(f"index pairs {i} and {i + 1} are not stacked")
    if bad:
        raise PreconditionError(bad)
    triples = [(pairs[xi][0], pairs[de][0], pairs[xi][1]) for xi, de in index_pairs]
    return LinearTupleSequence(order, tuple(triples))


def sigma_reduce(seq, sigma: Sequence[int], g):
    """Permute every tuple by sigma (new[i] = old[sigma[i]]) and return (seq', g o sigma)."""
    g = parse_type(g)
    sigma = tuple(int(v) for v in sigma)
    n = len(sigma)
    if sorted(sigma) != list(range(n)):
        raise PreconditionError(f"{sigma} is not a permutation of range({n})")
    if len(g) != n or (len(seq) and seq.n != n):
        raise PreconditionError("permutation, type and tuples disagree on arity")
    tuples = tuple(tuple(t[s] for s in sigma) for t in seq.tuples)
    g_star = tuple(g[s] for s in sigma)
    if isinstance(seq, LinearTupleSequence):
        rising = all(seq.order.less(u, v) for t in tuples for u, v in zip(t, t[1:]))
        return LinearTupleSequence(seq.order, tuples, increasing=rising), g_star
    base = tuple(seq.base[s] for s in sigma) if seq.base is not None else None
    return TreeTupleSequence(seq.tree, tuples, base=base, increasing=seq.increasing), g_star
