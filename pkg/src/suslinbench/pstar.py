"""Tree conditions carrying a finite specializing coloring of derived-tree tuple pairs.

A coloring maps pairs ``(c, a)`` of injective same-level tuples with ``c``
componentwise below ``a`` to naturals.  Two pairs sharing ``c`` whose
second tuples are componentwise comparable must get different colors.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .forcing import AmalgamationError, AmalgamationSpec, amalgamate, typed_matching
from .order_core import (
    Condition,
    Node,
    PreconditionError,
    condition_from_json,
    condition_to_json,
    condition_violations,
    end_extends,
)

__all__ = [
    "PStarCondition",
    "pstar_violations",
    "validate_pstar",
    "pstar_extends",
    "restrict_coloring",
    "pstar_amalgamate",
    "extract_specializer",
    "specializer_conflicts",
    "pstar_to_json",
    "pstar_from_json",
]


def _key(c, a) -> tuple:
    return (tuple(c), tuple(a))


@dataclass(frozen=True)
class PStarCondition:
    """A condition ``p`` with a coloring of pairs of ``arity``-tuples.

    ``coloring`` is stored as a sorted tuple of ``((c, a), color)`` entries so
    equal conditions compare and hash equal.
    """

    p: Condition
    coloring: tuple = ()
    arity: int = 2

    def __post_init__(self):
        raw = self.coloring.items() if isinstance(self.coloring, Mapping) else self.coloring
        entries = {}
        for (c, a), color in raw:
            k = _key(c, a)
            if k in entries and entries[k] != color:
                raise PreconditionError(f"pair {k} is colored twice")
            entries[k] = color
        object.__setattr__(self, "coloring", tuple(sorted(entries.items())))

    @property
    def f(self) -> dict:
        return dict(self.coloring)

    def __len__(self):
        return len(self.coloring)


def _tuple_problems(p: Condition, vec, what: str, arity: int) -> list:
    out = []
    if len(vec) != arity:
        out.append(f"{what} {vec} does not have arity {arity}")
    missing = [x for x in vec if x not in p.nodes]
    if missing:
        out.append(f"{what} {vec} has nodes outside the tree: {missing}")
    if len(set(vec)) != len(vec):
        out.append(f"{what} {vec} is not injective")
    if len({x.level for x in vec}) > 1:
        out.append(f"{what} {vec} does not sit on one level")
    return out


def _below(p: Condition, u: Sequence[Node], v: Sequence[Node]) -> bool:
    return len(u) == len(v) and all(p.less(x, y) for x, y in zip(u, v))


def pstar_violations(cond: PStarCondition) -> list:
    """One diagnostic per violated clause; empty iff the condition is valid."""
    cached = cond.__dict__.get("_violations")
    if cached is None:
        cached = cond.__dict__["_violations"] = tuple(_pstar_violations(cond))
    return list(cached)


def _pstar_violations(cond: PStarCondition) -> list:
    p = cond.p
    out = list(condition_violations(p))
    if out:
        return out
    if cond.arity < 1:
        out.append(f"arity {cond.arity} is not positive")
    ok_keys = []
    for (c, a), color in cond.coloring:
        bad = _tuple_problems(p, c, "base", cond.arity) + _tuple_problems(p, a, "tuple", cond.arity)
        if not bad and not _below(p, c, a):
            bad.append(f"base {c} is not below {a} componentwise")
        if not isinstance(color, int) or isinstance(color, bool) or color < 0:
            bad.append(f"color {color!r} of ({c}, {a}) is not a natural number")
        out.extend(bad)
        if not bad:
            ok_keys.append(((c, a), color))
    by_base: dict = {}
    for (c, a), color in ok_keys:
        by_base.setdefault(c, []).append((a, color))
    for c in sorted(by_base):
        tops = by_base[c]
        for a, ca in tops:
            for b, cb in tops:
                if ca == cb and _below(p, a, b):
                    out.append(f"pairs ({c}, {a}) and ({c}, {b}) are comparable and share color {ca}")
    return out


def validate_pstar(cond: PStarCondition) -> bool:
    return not pstar_violations(cond)


def pstar_extends(q: PStarCondition, p: PStarCondition) -> bool:
    """q extends p: its tree end-extends p's and its coloring contains p's."""
    for c in (q, p):
        bad = pstar_violations(c)
        if bad:
            raise PreconditionError(bad)
    if q.arity != p.arity or not end_extends(q.p, p.p):
        return False
    qf = q.f
    return all(qf.get(k) == v for k, v in p.coloring)


def restrict_coloring(f: Mapping, cut: int) -> dict:
    """Entries whose second tuple lies below level ``cut``."""
    return {k: v for k, v in f.items() if k[1][0].level < cut}


def pstar_amalgamate(c_xi: PStarCondition, c_beta: PStarCondition, tuples, starred,
                     g: Sequence[int], spec: AmalgamationSpec) -> PStarCondition:
    """Amalgamate the trees with cross relations only where g is 1; union the colorings.

    ``tuples`` is ``(a_xi, a_beta)`` and ``starred`` the least beta-side nodes
    below ``a_beta`` (None to compute them).  An empty ``spec.matched`` is
    filled in from g; a non-empty one must agree with it.  The type must be
    shorter than the coloring arity.
    """
    g = [int(v) for v in g]
    if c_xi.arity != c_beta.arity:
        raise PreconditionError("colorings have different arities")
    if not 1 <= len(g) < c_xi.arity:
        raise PreconditionError(f"type length {len(g)} must be positive and below the arity {c_xi.arity}")
    for c in (c_xi, c_beta):
        bad = pstar_violations(c)
        if bad:
            raise PreconditionError(bad)
    alpha, beta = spec.alpha, spec.beta
    fx, fb = c_xi.f, c_beta.f
    if restrict_coloring(fx, alpha) != restrict_coloring(fb, beta):
        raise PreconditionError("colorings disagree below the cut")
    a_xi, a_beta, _, _, matched = typed_matching(c_xi.p, c_beta.p, tuples, g, alpha, beta, starred)
    if spec.matched and set(spec.matched) != set(matched):
        raise PreconditionError("spec matching does not follow the type")
    q = amalgamate(c_xi.p, c_beta.p, AmalgamationSpec(alpha, beta, matched))
    for i, bit in enumerate(g):
        if bool(bit) != q.less(a_xi[i], a_beta[i]):
            raise AmalgamationError(f"coordinate {i} does not follow the type")
    out = PStarCondition(q, {**fx, **fb}, c_xi.arity)
    bad = pstar_violations(out)
    if bad:
        raise AmalgamationError(bad)
    return out


def extract_specializer(cond: PStarCondition, base: Sequence[Node]) -> dict:
    """The coloring of tuples above ``base``, keyed by the upper tuple."""
    base = tuple(base)
    if len(set(base)) != len(base):
        raise PreconditionError(f"{base} is not injective")
    missing = [x for x in base if x not in cond.p.nodes]
    if missing:
        raise PreconditionError(f"{missing} are not in the tree")
    return {a: color for (c, a), color in cond.coloring if c == base}


def specializer_conflicts(p: Condition, mapping: Mapping) -> list:
    """Pairs of componentwise comparable tuples sharing a color."""
    items = sorted(mapping.items())
    return [(a, b) for a, ca in items for b, cb in items if ca == cb and _below(p, a, b)]


def pstar_to_json(cond: PStarCondition) -> dict:
    obj = condition_to_json(cond.p)
    index = {x: i for i, x in enumerate(sorted(cond.p.nodes))}
    obj["arity"] = cond.arity
    obj["coloring"] = [
        {"c": [index[x] for x in c], "a": [index[x] for x in a], "color": color}
        for (c, a), color in cond.coloring
    ]
    return obj


def pstar_from_json(obj) -> PStarCondition:
    p = condition_from_json(obj)
    nodes = sorted(p.nodes)
    entries = []
    for e in obj.get("coloring", []):
        try:
            c = tuple(nodes[i] for i in e["c"])
            a = tuple(nodes[i] for i in e["a"])
        except IndexError as exc:
            raise PreconditionError(f"coloring entry {e} indexes a missing node") from exc
        entries.append(((c, a), e["color"]))
    arity = obj.get("arity")
    if arity is None:
        arity = len(entries[0][0][0]) if entries else 2
    return PStarCondition(p, entries, int(arity))
