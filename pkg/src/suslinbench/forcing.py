"""Constructive steps on tree conditions: insertion and amalgamation."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, NamedTuple, Optional, Sequence

from .order_core import (
    Condition,
    Node,
    PreconditionError,
    _require_valid,
    above,
    condition_violations,
    end_extends,
    fresh_rational,
    restrict,
)

__all__ = [
    "InsertionRequest",
    "AmalgamationSpec",
    "AmalgamationError",
    "insert_node",
    "multi_insert",
    "amalgamation_violations",
    "amalgamate",
    "cross_relations",
    "iter_amalgamation_specs",
    "compatible",
    "starred",
    "typed_matching",
    "amalgamate_with_type",
    "spec_to_json",
    "spec_from_json",
]


class AmalgamationError(RuntimeError):
    """An output that the construction guarantees valid turned out invalid."""


class InsertionRequest(NamedTuple):
    predecessor: Node
    successor: Node
    new_node: Node


@dataclass(frozen=True)
class AmalgamationSpec:
    alpha: int
    beta: int
    matched: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "matched", tuple(tuple(m) for m in self.matched))


def _insertion_violations(p: Condition, req: InsertionRequest) -> list:
    a, b, x = req
    out = []
    if x in p.nodes:
        out.append(f"new node {x} already present")
    if a not in p.nodes or b not in p.nodes:
        out.append(f"({a}, {b}) are not both nodes of the condition")
    elif (a, b) not in p.covers:
        out.append(f"{a} is not the immediate predecessor of {b}")
    if not a.level < x.level < b.level:
        out.append(f"level of {x} is not strictly between levels of {a} and {b}")
    return out


def insert_node(p: Condition, req: InsertionRequest) -> Condition:
    """Thread a fresh node between an immediate-predecessor pair."""
    _require_valid(p)
    bad = _insertion_violations(p, req)
    if bad:
        raise PreconditionError(bad)
    a, b, x = req
    rel = set(p.order)
    rel |= {(c, x) for c in p.nodes if p.leq(c, a)}
    rel |= {(x, d) for d in p.nodes if p.leq(b, d)}
    return Condition.from_order(p.nodes | {x}, rel)


def multi_insert(p: Condition, reqs: Sequence[InsertionRequest]) -> Condition:
    reqs = [InsertionRequest(*r) for r in reqs]
    pairs = [(r.predecessor, r.successor) for r in reqs]
    fresh = [r.new_node for r in reqs]
    bad = []
    if len(set(pairs)) != len(pairs):
        bad.append("insertion pairs are not distinct")
    if len(set(fresh)) != len(fresh):
        bad.append("new nodes are not distinct")
    if bad:
        raise PreconditionError(bad)
    q = p
    for r in reqs:
        q = insert_node(q, r)
    return q


def amalgamation_violations(p: Condition, q: Condition, spec: AmalgamationSpec) -> list:
    """Every failed hypothesis of the amalgamation step."""
    out = list(condition_violations(p)) + list(condition_violations(q))
    if out:
        return out
    alpha, beta = spec.alpha, spec.beta
    if not alpha < beta:
        out.append(f"alpha={alpha} is not below beta={beta}")
    low_p, low_q = restrict(p, alpha), restrict(q, beta)
    if low_p != low_q:
        out.append("p below alpha differs from q below beta")
    top_p, top_q = above(p, alpha), above(q, beta)
    for x in sorted(top_p.nodes):
        if x.level >= beta:
            out.append(f"node {x} of p above alpha reaches level beta")
    bs = [b for b, _ in spec.matched]
    cs = [c for _, c in spec.matched]
    if len(set(bs)) != len(bs):
        out.append("matched b-nodes repeat")
    if len(set(cs)) != len(cs):
        out.append("matched c-nodes repeat")
    for b in bs:
        if b not in top_p.nodes:
            out.append(f"matched node {b} is not in p above alpha")
    for i, b in enumerate(bs):
        for b2 in bs[i + 1:]:
            if b in p.nodes and b2 in p.nodes and p.comparable(b, b2):
                out.append(f"matched nodes {b} and {b2} are comparable in p")
    minimal = set(top_q.minimal_nodes())
    for c in cs:
        if c not in minimal:
            out.append(f"matched node {c} is not minimal in q above beta")
    for b, c in spec.matched:
        if b in p.nodes and c in q.nodes:
            lp = {x for x in low_p.nodes if p.less(x, b)}
            lq = {y for y in low_q.nodes if q.less(y, c)}
            if lp != lq:
                out.append(f"lower sets in the shared part differ for matched pair ({b}, {c})")
    return out


def amalgamate(p: Condition, q: Condition, spec: AmalgamationSpec) -> Condition:
    """Union of two conditions agreeing below a cut, with prescribed cross relations."""
    return _amalgamate(p, q, spec)


# conditions are immutable and hash cheaply, and exhaustive sweeps repeat inputs
@lru_cache(maxsize=4096)
def _amalgamate(p: Condition, q: Condition, spec: AmalgamationSpec) -> Condition:
    bad = amalgamation_violations(p, q, spec)
    if bad:
        raise PreconditionError(bad)
    rel = set(p.order) | set(q.order)
    for b_i, c_i in spec.matched:
        for b in p.nodes:
            if not p.leq(b, b_i):
                continue
            for c in q.nodes:
                if q.leq(c_i, c):
                    rel.add((b, c))
    rel = {(x, y) for x, y in rel if x != y}
    # the three clauses are already transitively closed
    for x, y in list(rel):
        for y2, z in list(rel):
            if y2 == y and (x, z) not in rel:
                raise AmalgamationError(f"clause relation not transitive at {x}<{y}<{z}")
    r = Condition.from_order(p.nodes | q.nodes, rel)
    if r.order != frozenset(rel):
        raise AmalgamationError("closure of the clause relation added pairs")
    bad = condition_violations(r)
    if bad:
        raise AmalgamationError(bad)
    return r


def cross_relations(r: Condition, p: Condition, q: Condition, spec: AmalgamationSpec) -> set:
    """Relations of r from p above alpha to q above beta."""
    top_p, top_q = above(p, spec.alpha), above(q, spec.beta)
    return {(b, c) for b in top_p.nodes for c in top_q.nodes if r.less(b, c)}


def _cut_candidates(*conds: Condition) -> list:
    levels = set()
    for c in conds:
        levels |= c.levels()
    return sorted({0} | {l + 1 for l in levels})


def _matchings(p: Condition, q: Condition, alpha: int, beta: int) -> Iterator[tuple]:
    top_p, top_q = above(p, alpha), above(q, beta)
    low = restrict(p, alpha)
    tops = top_p.sorted_nodes()
    mins = top_q.minimal_nodes()

    def lower(cond, x):
        return frozenset(y for y in low.nodes if cond.less(y, x))

    lower_c = {c: lower(q, c) for c in mins}

    def rec(start, chosen, used):
        yield tuple(chosen)
        for k in range(start, len(tops)):
            b = tops[k]
            if any(p.comparable(b, b2) for b2, _ in chosen):
                continue
            lb = lower(p, b)
            for c in mins:
                if c in used or lower_c[c] != lb:
                    continue
                yield from rec(k + 1, chosen + [(b, c)], used | {c})

    yield from rec(0, [], frozenset())


def iter_amalgamation_specs(p: Condition, q: Condition, *, matchings: bool = True,
                            cuts: Optional[Sequence[int]] = None) -> Iterator[AmalgamationSpec]:
    """Every applicable spec with cuts drawn from ``cuts``.

    By default the cuts are 0 and the successors of all node levels, and the
    beta cut may also be alpha + 1; cuts splitting the same levels yield the
    same restrictions, so this default loses no amalgamation.
    """
    explicit = cuts is not None
    cuts = sorted(set(cuts)) if explicit else _cut_candidates(p, q)
    for alpha in cuts:
        low_p = restrict(p, alpha)
        top_p = above(p, alpha)
        betas = cuts if explicit else sorted(set(cuts) | {alpha + 1})
        for beta in betas:
            if beta <= alpha:
                continue
            if any(x.level >= beta for x in top_p.nodes):
                continue
            if restrict(q, beta) != low_p:
                continue
            if not matchings:
                yield AmalgamationSpec(alpha, beta, ())
                continue
            for m in _matchings(p, q, alpha, beta):
                yield AmalgamationSpec(alpha, beta, m)


def compatible(p: Condition, q: Condition) -> Optional[Condition]:
    """A common extension built by amalgamation, or None if the search fails."""
    _require_valid(p, q)
    shared = p.nodes & q.nodes
    for x in shared:
        for y in shared:
            if p.less(x, y) != q.less(x, y):
                return None
    for first, second in ((p, q), (q, p)):
        for spec in iter_amalgamation_specs(first, second):
            return amalgamate(first, second, spec)
    return None


def starred(cond: Condition, cut: int, a: Node) -> Node:
    """Least node of the part at or above ``cut`` that lies below-or-at ``a``."""
    cands = [x for x in cond.nodes if x.level >= cut and cond.leq(x, a)]
    if not cands:
        raise PreconditionError(f"{a} is not above the cut {cut}")
    return min(cands, key=lambda x: x.level)


def _lower_in(cond: Condition, cut: int, x: Node) -> frozenset:
    return frozenset(y for y in cond.nodes if y.level < cut and cond.less(y, x))


def typed_matching(p_xi: Condition, p_beta: Condition, tuples, g: Sequence[int],
                   alpha: int, beta: int, starred_beta=None):
    """Check the tuple hypotheses of a typed amalgamation.

    Returns ``(a_xi, a_beta, star_xi, star_beta, matched)`` where ``matched``
    pairs ``a_xi[i]`` with the least beta-side node under ``a_beta[i]`` for
    every coordinate with ``g[i] == 1``.
    """
    a_xi, a_beta = (list(t) for t in tuples)
    g = [int(v) for v in g]
    n = len(g)
    if not (len(a_xi) == len(a_beta) == n):
        raise PreconditionError("tuple arities do not match the type")
    _require_valid(p_xi, p_beta)
    bad = []
    for a in a_xi:
        if a not in p_xi.nodes or a.level < alpha:
            bad.append(f"{a} is not in the xi-side part above the cut")
    for a in a_beta:
        if a not in p_beta.nodes or a.level < beta:
            bad.append(f"{a} is not in the beta-side part above the cut")
    if bad:
        raise PreconditionError(bad)
    star_xi = [starred(p_xi, alpha, a) for a in a_xi]
    star_beta = [starred(p_beta, beta, a) for a in a_beta]
    if starred_beta is not None and list(starred_beta) != star_beta:
        raise PreconditionError("supplied starred nodes are not the minimal nodes below the tuple")
    if len(set(star_beta)) != n:
        raise PreconditionError("starred beta-side nodes coincide")
    if len(set(star_xi)) != n:
        raise PreconditionError("starred xi-side nodes coincide")
    for i in range(n):
        if _lower_in(p_xi, alpha, a_xi[i]) != _lower_in(p_beta, beta, star_beta[i]):
            bad.append(f"shared lower sets differ at coordinate {i}")
    if bad:
        raise PreconditionError(bad)
    matched = tuple((a_xi[i], star_beta[i]) for i in range(n) if g[i] == 1)
    return a_xi, a_beta, star_xi, star_beta, matched


def amalgamate_with_type(p_xi: Condition, p_beta: Condition, tuples, g: Sequence[int],
                         alpha: int, beta: int, starred_beta=None) -> Condition:
    """Amalgamate so the two tuples realize ``g`` in the tree and in every lex completion.

    ``tuples`` is ``(a_xi, a_beta)``.  Coordinates with ``g[i] == 1`` become
    cross relations ``a_xi[i] < a_beta[i]``.  For ``g[i] == 0`` two fresh
    siblings are threaded just above the shared predecessor, the beta-side one
    carrying the smaller tag, so the beta-side node is lexicographically lower.
    """
    g = [int(v) for v in g]
    n = len(g)
    a_xi, a_beta, star_xi, star_beta, matched = typed_matching(
        p_xi, p_beta, tuples, g, alpha, beta, starred_beta)
    q = amalgamate(p_xi, p_beta, AmalgamationSpec(alpha, beta, matched))

    reqs = []
    used_tags = set(q.tags())
    for i in range(n):
        if g[i] == 1:
            continue
        d = q.predecessor(star_xi[i])
        if d is None or d != q.predecessor(star_beta[i]):
            raise PreconditionError(f"coordinate {i}: starred nodes lack a common immediate predecessor")
        slot = d.level + 1
        if not (slot < star_xi[i].level and slot < star_beta[i].level):
            raise PreconditionError(f"coordinate {i}: no free level between {d} and the starred nodes")
        lo = fresh_rational(used_tags)
        used_tags.add(lo)
        hi = fresh_rational(used_tags, (lo, None))
        used_tags.add(hi)
        reqs.append((d, star_beta[i], Node(slot, lo)))
        reqs.append((d, star_xi[i], Node(slot, hi)))
    r = multi_insert(q, reqs)
    for i in range(n):
        if bool(g[i]) != r.less(a_xi[i], a_beta[i]):
            raise AmalgamationError(f"coordinate {i} does not follow the type")
    if not (end_extends(r, p_xi) and end_extends(r, p_beta)):
        raise AmalgamationError("typed amalgamation fails to end-extend its inputs")
    return r


def spec_to_json(spec: AmalgamationSpec, p: Condition, q: Condition) -> dict:
    pi = {x: i for i, x in enumerate(sorted(p.nodes))}
    qi = {x: i for i, x in enumerate(sorted(q.nodes))}
    return {"alpha": spec.alpha, "beta": spec.beta,
            "matched": [[pi[b], qi[c]] for b, c in spec.matched]}


def spec_from_json(obj, p: Condition, q: Condition) -> AmalgamationSpec:
    pn, qn = sorted(p.nodes), sorted(q.nodes)
    return AmalgamationSpec(int(obj["alpha"]), int(obj["beta"]),
                            tuple((pn[i], qn[j]) for i, j in obj.get("matched", [])))
