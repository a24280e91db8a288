"""Hypothesis strategies for conditions, trees and tuple sequences."""
from fractions import Fraction

from hypothesis import strategies as st

from suslinbench.leveled_tree import LeveledTree
from suslinbench.order_core import Condition, Node


@st.composite
def conditions(draw, max_nodes=7, max_gap=2):
    """Valid conditions: every node hangs off an earlier one (or none) at a higher level."""
    n = draw(st.integers(0, max_nodes))
    nodes, covers = [], []
    used_tags = set()
    for k in range(n):
        parent = draw(st.one_of(st.none(), st.integers(0, k - 1))) if k else None
        base = nodes[parent].level + 1 if parent is not None else 0
        level = base + draw(st.integers(0, max_gap))
        tag = draw(st.fractions(min_value=-4, max_value=4, max_denominator=4)
                   .filter(lambda q: (level, q) not in used_tags))
        used_tags.add((level, tag))
        x = Node(level, tag)
        nodes.append(x)
        if parent is not None:
            covers.append((nodes[parent], x))
    return Condition(frozenset(nodes), frozenset(covers))


@st.composite
def leveled_trees(draw, max_height=4, max_width=5, normal=False):
    """Leveled trees; with ``normal`` every non-top node gets at least two children."""
    height = draw(st.integers(1, max_height))
    levels, parent = [], {}
    prev = []
    for k in range(height):
        if normal:
            lo = 2 * len(prev) if prev else 1
            width = draw(st.integers(lo, lo + 1))
        else:
            width = draw(st.integers(1, max_width))
        tags = sorted(draw(st.sets(st.integers(-20, 20), min_size=width, max_size=width)))
        here = [Node(k, Fraction(q)) for q in tags]
        if prev:
            owners = list(prev) * 2 if normal else []
            owners += [draw(st.sampled_from(prev)) for _ in range(width - len(owners))]
            order = draw(st.permutations(range(width)))
            for x, i in zip(owners, order):
                parent[here[i]] = x
        levels.append(tags)
        prev = here
    return LeveledTree.from_parents(levels, parent)


@st.composite
def amalgamation_instances(draw, max_nodes=5, max_new=3):
    """(p, q, spec): q shares p's part below alpha and adds nodes from beta up."""
    from suslinbench.forcing import iter_amalgamation_specs
    from suslinbench.order_core import restrict

    p = draw(conditions(max_nodes=max_nodes))
    top = max((x.level for x in p.nodes), default=-1)
    alpha = draw(st.integers(0, top + 1))
    high = [x.level for x in p.nodes if x.level >= alpha]
    beta = max([alpha + 1] + [lv + 1 for lv in high]) + draw(st.integers(0, 1))
    low = restrict(p, alpha)
    nodes, covers = list(low.nodes), set(low.covers)
    for k in range(draw(st.integers(0, max_new))):
        parent = draw(st.one_of(st.none(), st.sampled_from(nodes))) if nodes else None
        floor = beta if parent is None or parent.level < beta else parent.level + 1
        level = floor + draw(st.integers(0, 1))
        x = Node(level, Fraction(100 + k))
        nodes.append(x)
        if parent is not None:
            covers.add((parent, x))
    q = Condition(frozenset(nodes), frozenset(covers))
    specs = list(iter_amalgamation_specs(p, q, cuts=[alpha, beta]))
    spec = draw(st.sampled_from(specs))
    return p, q, spec


@st.composite
def level_maps(draw, span=12):
    """A strictly increasing map on levels 0..span-1, as a list."""
    gaps = draw(st.lists(st.integers(1, 3), min_size=span, max_size=span))
    start = draw(st.integers(0, 2))
    out, cur = [], start
    for g in gaps:
        out.append(cur)
        cur += g
    return out
