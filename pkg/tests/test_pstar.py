import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import conditions
from suslinbench.forcing import AmalgamationError, AmalgamationSpec, amalgamate
from suslinbench.order_core import Condition, PreconditionError
from suslinbench.order_core import N
from suslinbench.pstar import (
    PStarCondition,
    extract_specializer,
    pstar_amalgamate,
    pstar_extends,
    pstar_from_json,
    pstar_to_json,
    pstar_violations,
    restrict_coloring,
    specializer_conflicts,
    validate_pstar,
)

# Two roots, each with a chain of two successors on levels 1 and 2.
R0, R1 = N(0, 0), N(0, 1)
A0, A1 = N(1, 0), N(1, 1)
B0, B1 = N(2, 0), N(2, 1)
TREE = Condition.from_order([R0, R1, A0, A1, B0, B1],
                            [(R0, A0), (R1, A1), (A0, B0), (A1, B1)])
C = (R0, R1)


def test_empty_coloring_is_valid():
    assert validate_pstar(PStarCondition(TREE))
    assert validate_pstar(PStarCondition(Condition()))


def test_comparable_pairs_need_different_colors():
    same = PStarCondition(TREE, {(C, (A0, A1)): 0, (C, (B0, B1)): 0})
    assert not validate_pstar(same)
    assert any("share color" in v for v in pstar_violations(same))
    assert validate_pstar(PStarCondition(TREE, {(C, (A0, A1)): 0, (C, (B0, B1)): 1}))


def test_incomparable_pairs_may_share_a_color():
    b2 = N(2, 2)
    tree = Condition.from_order(TREE.nodes | {b2}, set(TREE.order) | {(A0, b2)})
    cond = PStarCondition(tree, {(C, (B0, B1)): 0, (C, (b2, B1)): 0})
    assert validate_pstar(cond)
    assert extract_specializer(cond, C) == {(B0, B1): 0, (b2, B1): 0}


def test_tuples_must_sit_above_their_base():
    cond = PStarCondition(TREE, {(C, (A1, A0)): 0})
    assert any("componentwise" in v for v in pstar_violations(cond))


@pytest.mark.parametrize("entry, message", [
    (((R0, R1), (A0, B1)), "one level"),
    (((R0, R0), (A0, A1)), "injective"),
    (((R0, R1), (A0,)), "arity"),
    (((R0, R1), (A1, A0)), "componentwise"),
    (((R0, R1), (A0, N(1, 7))), "outside"),
])
def test_domain_clauses(entry, message):
    bad = pstar_violations(PStarCondition(TREE, {entry: 0}))
    assert any(message in v for v in bad), bad


def test_colors_must_be_naturals():
    assert not validate_pstar(PStarCondition(TREE, {(C, (A0, A1)): -1}))
    assert not validate_pstar(PStarCondition(TREE, {(C, (A0, A1)): True}))


def test_double_coloring_is_rejected():
    with pytest.raises(PreconditionError):
        PStarCondition(TREE, [((C, (A0, A1)), 0), ((C, (A0, A1)), 1)])


def test_extends_examples():
    base = PStarCondition(TREE, {(C, (A0, A1)): 0})
    assert pstar_extends(base, base)
    bigger = Condition.from_order(TREE.nodes | {N(3, 0)}, set(TREE.order) | {(B0, N(3, 0))})
    assert pstar_extends(PStarCondition(bigger, base.coloring), base)
    recolored = PStarCondition(bigger, {(C, (A0, A1)): 1})
    assert not pstar_extends(recolored, base)
    assert not pstar_extends(PStarCondition(TREE, {}, arity=3), PStarCondition(TREE, {}))


def test_restrict_coloring_uses_the_upper_tuple_level():
    f = {(C, (A0, A1)): 0, (C, (B0, B1)): 1}
    assert restrict_coloring(f, 2) == {(C, (A0, A1)): 0}
    assert restrict_coloring(f, 1) == {}


def test_json_round_trip():
    cond = PStarCondition(TREE, {(C, (A0, A1)): 0, (C, (B0, B1)): 1})
    assert pstar_from_json(pstar_to_json(cond)) == cond


def test_extract_examples():
    assert extract_specializer(PStarCondition(TREE), C) == {}
    cond = PStarCondition(TREE, {(C, (A0, A1)): 0, (C, (B0, B1)): 1})
    spec = extract_specializer(cond, C)
    assert spec[(A0, A1)] != spec[(B0, B1)]
    assert specializer_conflicts(TREE, spec) == []
    assert specializer_conflicts(TREE, {(A0, A1): 3, (B0, B1): 3}) == [((A0, A1), (B0, B1))]
    with pytest.raises(PreconditionError):
        extract_specializer(cond, (R0, R0))


# -- amalgamation ----------------------------------------------------------------------

def _sides():
    """Shared base (two roots) below the cut, one chain pair per side above it."""
    xi_top = [N(1, 0), N(1, 1)]
    beta_top = [N(3, 0), N(3, 1)]
    p = Condition.from_order([R0, R1] + xi_top, [(R0, xi_top[0]), (R1, xi_top[1])])
    q = Condition.from_order([R0, R1] + beta_top, [(R0, beta_top[0]), (R1, beta_top[1])])
    return p, q, xi_top, beta_top


def test_empty_colorings_give_plain_amalgamation():
    p, q, xi_top, beta_top = _sides()
    out = pstar_amalgamate(PStarCondition(p), PStarCondition(q), ((xi_top[0],), (beta_top[0],)),
                           None, (1,), AmalgamationSpec(1, 3, ()))
    assert out.coloring == ()
    assert out.p == amalgamate(p, q, AmalgamationSpec(1, 3, ((xi_top[0], beta_top[0]),)))


def test_shared_entry_below_the_cut_is_kept_once():
    root = N(0, 0)
    low = [N(1, 0), N(1, 1)]
    base_nodes = [N(0, 0), N(0, 1)] + low
    base_rel = [(N(0, 0), low[0]), (N(0, 1), low[1])]
    p = Condition.from_order(base_nodes + [N(2, 0)], base_rel + [(low[0], N(2, 0))])
    q = Condition.from_order(base_nodes + [N(4, 0)], base_rel + [(low[0], N(4, 0))])
    entry = {((root, N(0, 1)), tuple(low)): 2}
    cx, cb = PStarCondition(p, entry), PStarCondition(q, entry)
    out = pstar_amalgamate(cx, cb, ((N(2, 0),), (N(4, 0),)), None, (1,), AmalgamationSpec(2, 4, ()))
    assert out.f == entry and validate_pstar(out)


def test_one_cross_relation_keeps_same_colored_tuples_apart():
    p, q, xi_top, beta_top = _sides()
    cx = PStarCondition(p, {(C, tuple(xi_top)): 0})
    cb = PStarCondition(q, {(C, tuple(beta_top)): 0})
    # cross-relating only one coordinate keeps the two colored tuples incomparable
    out = pstar_amalgamate(cx, cb, ((xi_top[0],), (beta_top[0],)), None, (1,), AmalgamationSpec(1, 3, ()))
    assert validate_pstar(out) and len(out) == 2
    assert not all(out.p.less(u, v) for u, v in zip(xi_top, beta_top))


def test_type_must_be_shorter_than_the_arity():
    p, q, xi_top, beta_top = _sides()
    with pytest.raises(PreconditionError):
        pstar_amalgamate(PStarCondition(p), PStarCondition(q), (tuple(xi_top), tuple(beta_top)),
                         None, (1, 1), AmalgamationSpec(1, 3, ()))


def test_disagreeing_lower_colorings_are_rejected():
    root = N(0, 0)
    low = (N(1, 0), N(1, 1))
    base = Condition.from_order([root, N(0, 1)] + list(low), [(root, low[0]), (N(0, 1), low[1])])
    p = Condition.from_order(base.nodes | {N(2, 0)}, set(base.order) | {(low[0], N(2, 0))})
    q = Condition.from_order(base.nodes | {N(4, 0)}, set(base.order) | {(low[0], N(4, 0))})
    cx = PStarCondition(p, {((root, N(0, 1)), low): 0})
    cb = PStarCondition(q, {((root, N(0, 1)), low): 1})
    with pytest.raises(PreconditionError):
        pstar_amalgamate(cx, cb, ((N(2, 0),), (N(4, 0),)), None, (1,), AmalgamationSpec(2, 4, ()))


def test_spec_matching_must_follow_the_type():
    p, q, xi_top, beta_top = _sides()
    wrong = AmalgamationSpec(1, 3, ((xi_top[1], beta_top[1]),))
    with pytest.raises(PreconditionError):
        pstar_amalgamate(PStarCondition(p), PStarCondition(q), ((xi_top[0],), (beta_top[0],)),
                         None, (1,), wrong)


def test_straddling_same_color_pair_cannot_be_built():
    # Full cross relation on both coordinates would make the two same-colored
    # tuples comparable; the arity bound on the type forbids asking for it.
    p, q, xi_top, beta_top = _sides()
    cx = PStarCondition(p, {(C, tuple(xi_top)): 0})
    cb = PStarCondition(q, {(C, tuple(beta_top)): 0})
    with pytest.raises(PreconditionError):
        pstar_amalgamate(cx, cb, (tuple(xi_top), tuple(beta_top)), None, (1, 1), AmalgamationSpec(1, 3, ()))
    # forcing it through the plain amalgamation gives an invalid colored condition
    both = AmalgamationSpec(1, 3, tuple(zip(xi_top, beta_top)))
    forced = PStarCondition(amalgamate(p, q, both), {**cx.f, **cb.f})
    assert not validate_pstar(forced)


def _colorable_keys(p):
    out = []
    for c in itertools.permutations(sorted(p.nodes), 2):
        for a in itertools.permutations(sorted(p.nodes), 2):
            if c[0].level == c[1].level and a[0].level == a[1].level and all(p.less(u, v) for u, v in zip(c, a)):
                out.append((c, a))
    return out


@given(conditions(max_nodes=7, max_gap=1), st.data())
def test_greedy_colorings_validate_and_specialize(p, data):
    keys = _colorable_keys(p)
    if not keys:
        return
    chosen = data.draw(st.lists(st.sampled_from(keys), unique=True, max_size=6))
    f = {}
    for c, a in chosen:
        taken = {col for (c2, a2), col in f.items()
                 if c2 == c and (all(p.less(u, v) for u, v in zip(a, a2)) or all(p.less(v, u) for u, v in zip(a, a2)))}
        f[(c, a)] = min(set(range(len(chosen) + 1)) - taken)
    cond = PStarCondition(p, f)
    assert validate_pstar(cond)
    for c in {c for c, _ in f}:
        assert specializer_conflicts(p, extract_specializer(cond, c)) == []


def test_amalgamation_error_is_a_runtime_error():
    assert issubclass(AmalgamationError, RuntimeError)
