import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from strategies import leveled_trees
from suslinbench.entangle import (
    LinearTupleSequence,
    TreeTupleSequence,
    check_separated,
    complement,
    delta_bound,
    format_type,
    nested_triples,
    parse_type,
    project_and_group,
    realize_linear,
    realize_tree,
    satisfies_linear,
    satisfies_tree,
    section4_counterexample,
    sigma_reduce,
)
from suslinbench.instances import iter_index_pairs, iter_interval_sequences, random_tree_sequence
from suslinbench.leveled_tree import PerfectBinaryTree, build_pseudo_generic, full_tree
from suslinbench.lex import LinearOrder
from suslinbench.order_core import PreconditionError
from suslinbench.order_core import N

L4 = LinearOrder.range(4)


def seq(order, *tuples):
    return LinearTupleSequence(order, tuples)


# -- types -------------------------------------------------------------------------

def test_type_parsing():
    assert parse_type("101") == (1, 0, 1) == parse_type([1, 0, 1])
    assert format_type((0, 1)) == "01"
    with pytest.raises(PreconditionError):
        parse_type("12")
    with pytest.raises(PreconditionError):
        parse_type("")


def test_complement_examples():
    assert complement((1, 0)) == (0, 1)
    assert complement(complement("0110")) == (0, 1, 1, 0)


# -- linear sequences --------------------------------------------------------------------

def test_satisfies_linear_examples():
    assert satisfies_linear(L4, (0, 1), (2, 3), (1, 1))
    assert not satisfies_linear(L4, (0, 1), (2, 3), (1, 0))
    assert satisfies_linear(L4, (0, 2), (1, 3), (1, 1))
    with pytest.raises(PreconditionError):
        satisfies_linear(L4, (0, 1), (2, 3), (1,))


def test_realize_linear_examples():
    s = seq(L4, (0, 1), (2, 3))
    assert realize_linear(s, (1, 1)) == (0, 1)
    assert realize_linear(s, (1, 0)) is None
    assert realize_linear(s, (0, 0)) == (1, 0)


def test_sequence_validation():
    with pytest.raises(PreconditionError):
        seq(L4, (0, 1), (1, 2))
    with pytest.raises(PreconditionError):
        seq(L4, (1, 0))
    with pytest.raises(PreconditionError):
        seq(L4, (0, 9))
    with pytest.raises(PreconditionError):
        seq(L4, (0, 1), (2,))


def test_separated_examples():
    assert check_separated(seq(LinearOrder.range(5), (0, 3), (1, 4))) == (2,)
    assert check_separated(seq(L4, (0, 1), (2, 3))) is None
    assert check_separated(seq(L4, (0,), (2,))) == ()
    s = seq(LinearOrder.range(6), (0, 3), (1, 5))
    assert check_separated(s) == (2,)
    assert check_separated(s, [2]) == (2,)
    assert check_separated(s, [4]) is None
    assert check_separated(s, [2, 3]) is None


@st.composite
def linear_sequences(draw, max_n=3, max_tuples=5):
    n = draw(st.integers(1, max_n))
    count = draw(st.integers(0, max_tuples))
    size = n * count + draw(st.integers(0, 3))
    elements = draw(st.permutations(range(size)))
    order = LinearOrder(elements)
    pool = draw(st.permutations(range(size)))[: n * count]
    tuples = [tuple(sorted(pool[i * n:(i + 1) * n], key=order.rank.get)) for i in range(count)]
    return LinearTupleSequence(order, tuples)


@given(linear_sequences(), st.data())
def test_realize_linear_matches_oracle(s, data):
    g = data.draw(st.lists(st.integers(0, 1), min_size=max(1, s.n), max_size=max(1, s.n)))
    if not s.tuples:
        return
    assert realize_linear(s, g) == oracles.realize_linear(s.order.less, s.tuples, g)


@given(linear_sequences(), st.data())
def test_complement_symmetry(s, data):
    if not s.tuples:
        return
    g = data.draw(st.lists(st.integers(0, 1), min_size=s.n, max_size=s.n))
    hit, flip = realize_linear(s, g), realize_linear(s, complement(g))
    assert (hit is None) == (flip is None)
    if hit is not None:
        i, j = hit
        assert satisfies_linear(s.order, s.tuples[j], s.tuples[i], complement(g))


@given(linear_sequences())
def test_separator_search_matches_brute_force(s):
    found = check_separated(s)
    if s.n < 2 or not s.tuples:
        return
    sep_ok = all(
        any(all(s.order.less(t[i], c) and s.order.less(c, t[i + 1]) for t in s.tuples) for c in s.order)
        for i in range(s.n - 1))
    assert (found is not None) == sep_ok
    if found is not None:
        assert check_separated(s, found) == found


# -- trees ---------------------------------------------------------------------------

def test_satisfies_tree_examples():
    t = full_tree(4)
    assert satisfies_tree(t, [N(0, 0)], [N(2, 1)], (1,))
    assert satisfies_tree(t, [N(1, 0), N(1, 1)], [N(2, 0), N(2, 3)], (1, 1))
    assert satisfies_tree(t, [N(1, 0), N(1, 1)], [N(2, 3), N(3, 0)], (0, 0))
    with pytest.raises(PreconditionError):
        satisfies_tree(t, [N(2, 0)], [N(2, 1)], (1,))


def test_realize_tree_requires_increasing_height():
    t = full_tree(3)
    s = TreeTupleSequence(t, [(N(2, 0),), (N(1, 1),)])
    with pytest.raises(PreconditionError):
        realize_tree(s, (1,))


def test_delta_bound_examples():
    t = full_tree(4)
    assert delta_bound(TreeTupleSequence(t, [(N(1, 0),), (N(2, 0),)])) == 0
    assert delta_bound(TreeTupleSequence(t, [(N(1, 0), N(1, 1))])) == 1
    base = (N(1, 0), N(1, 1))
    s = TreeTupleSequence(t, [(N(2, 0), N(2, 3)), (N(3, 1), N(3, 5))], base=base)
    assert delta_bound(s) == 1 <= base[0].level + 1


def test_project_and_group_examples():
    t = full_tree(5)
    base = (N(2, 0), N(2, 3))
    s = TreeTupleSequence(t, [(N(3, 0), N(3, 6)), (N(4, 1), N(4, 13))], base=base, increasing=True)
    groups = project_and_group(s, 2)
    assert [b for b, _ in groups] == [base] and len(groups[0][1]) == 2
    s2 = TreeTupleSequence(t, [(N(3, 0), N(3, 4)), (N(4, 4), N(4, 12))], increasing=True)
    groups = project_and_group(s2, 2)
    assert [b for b, _ in groups] == [(N(2, 0), N(2, 2)), (N(2, 1), N(2, 3))]
    with pytest.raises(PreconditionError):
        project_and_group(s2, 1)


def test_project_and_group_drops_tuples_touching_the_level():
    t = full_tree(4)
    s = TreeTupleSequence(t, [(N(2, 0), N(3, 6))], increasing=True)
    (base, sub), = project_and_group(s, 2)
    assert base == (N(2, 0), N(2, 3)) and len(sub) == 0


@given(leveled_trees(max_height=5, max_width=5), st.integers(0, 10**6), st.integers(1, 3))
def test_projection_groups_are_injective_above_their_base(t, seed, n):
    rng = random.Random(seed)
    tuples = random_tree_sequence(rng, t, n, 6)
    s = TreeTupleSequence(t, tuples, increasing=True)
    level = delta_bound(s) + 1
    if any(min(v.level for v in tup) < level for tup in tuples):
        return
    for base, sub in project_and_group(s, level):
        assert len(set(base)) == len(base)
        for tup in sub.tuples:
            assert all(t.less(c, a) for c, a in zip(base, tup))


@given(leveled_trees(max_height=5, max_width=4), st.integers(0, 10**6), st.integers(1, 3), st.data())
def test_realize_tree_matches_oracle(t, seed, n, data):
    tuples = random_tree_sequence(random.Random(seed), t, n, 6)
    if not tuples:
        return
    s = TreeTupleSequence(t, tuples, increasing=True)
    g = data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    assert realize_tree(s, g) == oracles.realize_tree(t, tuples, g)


# -- constructions -------------------------------------------------------------------

def test_section4_examples():
    t = PerfectBinaryTree(3, seed=0)
    one = section4_counterexample(t, 1, seed=0)
    assert len(one) == 1 and realize_tree(one, (1, 1)) is None
    two = section4_counterexample(full_tree(6), 2, seed=1)
    assert realize_tree(two, (1, 1)) is None
    hit = realize_tree(two, (0, 0))
    assert hit is None or hit == (0, 1)
    with pytest.raises(PreconditionError):
        section4_counterexample(full_tree(5), 2)


@given(st.integers(1, 12), st.integers(0, 10**6))
def test_section4_never_realizes_one_one(k, seed):
    t = PerfectBinaryTree(3 * k, seed=seed)
    s = section4_counterexample(t, k, seed=seed)
    assert len(s) == k
    for y, z in s.tuples:
        assert t.parent_of(y) == t.parent_of(z) and y != z
    assert realize_tree(s, (1, 1)) is None


def test_section4_on_a_generic_tree():
    t = build_pseudo_generic(9, seed=2)
    assert realize_tree(section4_counterexample(t, 3, seed=5), (1, 1)) is None


def test_nested_triples_examples():
    order = LinearOrder.range(8)
    single = nested_triples(order, [(0, 7), (1, 2)], [(0, 1)])
    assert single.tuples == ((0, 1, 7),) and realize_linear(single, (1, 0, 1)) is None
    pairs = [(0, 3), (1, 2), (4, 7), (5, 6)]
    s = nested_triples(order, pairs, [(0, 1), (2, 3)])
    assert s.tuples == ((0, 1, 3), (4, 5, 7))
    assert realize_linear(s, (1, 0, 1)) is None
    with pytest.raises(PreconditionError):
        nested_triples(order, [(0, 3), (2, 5)], [(0, 1)])


def test_nested_triples_small_sweep():
    order = LinearOrder.range(6)
    count = 0
    for pairs in iter_interval_sequences(6, 3):
        for ips in iter_index_pairs(pairs, 2):
            count += 1
            assert realize_linear(nested_triples(order, pairs, ips), (1, 0, 1)) is None
    assert count > 0


def test_sigma_reduce_examples():
    s = seq(L4, (0, 1), (2, 3))
    same, g = sigma_reduce(s, (0, 1), (0, 1))
    assert same == s and g == (0, 1)
    swapped, g = sigma_reduce(s, (1, 0), (0, 1))
    assert g == (1, 0) and swapped.tuples == ((1, 0), (3, 2)) and not swapped.increasing
    back, g2 = sigma_reduce(swapped, (1, 0), g)
    assert back == s and g2 == (0, 1)
    with pytest.raises(PreconditionError):
        sigma_reduce(s, (0, 0), (0, 1))


@given(leveled_trees(max_height=5, max_width=5), st.integers(0, 10**6), st.data())
def test_sigma_round_trip_and_realization(t, seed, data):
    n = data.draw(st.integers(1, 3))
    tuples = random_tree_sequence(random.Random(seed), t, n, 5)
    if not tuples:
        return
    s = TreeTupleSequence(t, tuples, increasing=True)
    sigma = data.draw(st.permutations(range(n)))
    inverse = [sigma.index(i) for i in range(n)]
    g = data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    s2, g2 = sigma_reduce(s, sigma, g)
    back, g3 = sigma_reduce(s2, inverse, g2)
    assert back == s and g3 == tuple(g)
    # permuting coordinates consistently preserves which pairs realize the type
    assert realize_tree(s2, g2) == realize_tree(s, g)


def test_sigma_reduce_permutes_the_base():
    t = full_tree(3)
    base = (N(1, 0), N(1, 1))
    s = TreeTupleSequence(t, [(N(2, 0), N(2, 2))], base=base)
    s2, _ = sigma_reduce(s, (1, 0), (1, 1))
    assert s2.base == (N(1, 1), N(1, 0)) and s2.tuples == ((N(2, 2), N(2, 0)),)


def test_doubling_pairs_exhaustive_up_to_eight():
    from suslinbench.lex import double, doubling_witness
    for size in range(1, 9):
        base = LinearOrder.range(size)
        s = LinearTupleSequence(double(base), doubling_witness(base))
        assert realize_linear(s, (1, 0)) is None
        assert (realize_linear(s, (1, 1)) is not None) == (size >= 2)
        for u, v in itertools.permutations(s.tuples, 2):
            assert not satisfies_linear(s.order, u, v, (1, 0))
