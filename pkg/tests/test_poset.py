import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import brute
from unionfree import (
    ContractError,
    FROM_MAXIMAL,
    FROM_MINIMAL,
    OrderRelation,
    SetFamily,
    build_inclusion_order,
    classify_structure,
    decompose_levels,
    longest_chain,
    random_family,
    restrict_to,
)
from unionfree.poset import ascending_chain_through_levels, classify, largest_level


def fam(*sets):
    return SetFamily.from_sets(sets)


def order_of(*sets):
    return build_inclusion_order(fam(*sets))


def test_inclusion_order_examples():
    d = order_of([1], [1, 2]).dominates
    assert d.tolist() == [[False, False], [True, False]]
    assert not order_of([1], [2], [3]).dominates.any()
    assert order_of([1], [2], [1, 2]).dominates.sum() == 2


def test_wide_universe_order():
    sets = [list(range(k * 40, k * 40 + 70)) for k in range(3)] + [list(range(150))]
    d = build_inclusion_order(SetFamily.from_sets(sets)).dominates
    assert d[3, :3].all() and not d[:3].any()


def test_from_matrix_rejects_non_orders():
    with pytest.raises(ContractError):
        OrderRelation.from_matrix([[True]])
    with pytest.raises(ContractError):
        OrderRelation.from_matrix([[False, True], [True, False]])
    with pytest.raises(ContractError):
        # 2 > 1 > 0 without 2 > 0
        OrderRelation.from_matrix([[0, 0, 0], [1, 0, 0], [0, 1, 0]])


def test_from_pairs_closes_transitively():
    o = OrderRelation.from_pairs(3, [(2, 1), (1, 0)])
    assert o.below(0, 2)
    assert o.out_degree.tolist() == [0, 1, 2]
    assert o.in_degree.tolist() == [2, 1, 0]


def test_chain_of_four_levels():
    o = order_of([1], [1, 2], [1, 2, 3], [1, 2, 3, 4])
    for direction in (FROM_MAXIMAL, FROM_MINIMAL):
        lv = decompose_levels(o, direction)
        assert lv.levels == ((0,), (1,), (2,), (3,))
    assert longest_chain(o, decompose_levels(o)) == [0, 1, 2, 3]


def test_antichain_single_level():
    o = order_of([1], [2], [3], [4], [5])
    lv = decompose_levels(o)
    assert lv.levels == ((0, 1, 2, 3, 4),)
    assert longest_chain(o, lv) == [0]


def test_peeling_example():
    o = order_of([1], [2], [1, 2])
    lv = decompose_levels(o, FROM_MAXIMAL)
    assert lv.level(2) == (2,)
    assert lv.level(1) == (0, 1)
    assert longest_chain(o, lv) == [0, 2]


def test_directions_differ():
    # an isolated set is maximal and minimal at once
    o = order_of([1], [1, 2], [1, 2, 3], [5])
    top = decompose_levels(o, FROM_MAXIMAL)
    bottom = decompose_levels(o, FROM_MINIMAL)
    assert top.rank[3] == 3
    assert bottom.rank[3] == 1
    assert longest_chain(o, bottom) == [0, 1, 2]


def test_ascending_chain_examples():
    o = order_of([1], [1, 2], [1, 2, 3])
    lv = decompose_levels(o)
    assert ascending_chain_through_levels(lv, o, 0, 2, 3) == [1, 2]

    o = order_of([1], [2], [1, 2])
    lv = decompose_levels(o)
    assert ascending_chain_through_levels(lv, o, 0, 1, 1) == [0]

    o = order_of([1], [2], [1, 2], [1, 3])
    lv = decompose_levels(o)
    assert ascending_chain_through_levels(lv, o, 0, 2, 2) == [2]


def test_ascending_chain_contract():
    o = order_of([1], [1, 2])
    lv = decompose_levels(o)
    with pytest.raises(ContractError):
        ascending_chain_through_levels(lv, o, 1, 1, 2)
    with pytest.raises(ContractError):
        ascending_chain_through_levels(lv, o, 0, 1, 3)
    with pytest.raises(ContractError):
        ascending_chain_through_levels(decompose_levels(o, FROM_MINIMAL), o, 0, 1, 2)


def test_restrict_to():
    o = order_of([1], [1, 2], [1, 2, 3])
    same, remap = restrict_to(o, range(3))
    assert (same.dominates == o.dominates).all() and remap == (0, 1, 2)
    one, remap = restrict_to(o, [1])
    assert one.n == 1 and not one.dominates.any() and remap == (1,)
    two, remap = restrict_to(o, [0, 1])
    assert remap == (0, 1)
    assert decompose_levels(two).t == 2


def _check_decomposition(f, o, lv):
    rank = lv.rank
    d = o.dominates
    for layer in lv.levels:
        assert classify_structure(f, layer) == "antichain" or len(layer) == 1
    assert sorted(v for layer in lv.levels for v in layer) == list(range(f.m))
    xs, ys = np.nonzero(d)
    assert all(rank[y] < rank[x] for x, y in zip(xs, ys))
    if lv.direction == FROM_MAXIMAL:
        # successor property
        for i in range(1, lv.t):
            for v in lv.level(i):
                assert any(d[w, v] for w in lv.level(i + 1))
        assert set(lv.level(lv.t)) == {v for v in range(f.m) if not d[:, v].any()}
    else:
        assert set(lv.level(1)) == {v for v in range(f.m) if not d[v].any()}


def test_decomposition_invariants_on_random_families():
    rng = random.Random(11)
    for seed in range(500):
        u = rng.randint(3, 16)
        m = rng.randint(1, min(200, 2**u))
        mode = "interval" if seed % 4 == 0 else "bernoulli"
        if mode == "interval":
            m = min(m, u * (u + 1) // 2)
        f = random_family(seed, m, u, rng.uniform(0.1, 0.9), mode)
        o = build_inclusion_order(f)
        top = decompose_levels(o, FROM_MAXIMAL)
        bottom = decompose_levels(o, FROM_MINIMAL)
        _check_decomposition(f, o, top)
        _check_decomposition(f, o, bottom)
        t = brute.poset_height(o.dominates.tolist())
        assert top.t == bottom.t == t
        for lv in (top, bottom):
            chain = longest_chain(o, lv)
            assert len(chain) == t
            assert classify(o, chain) == "chain"
        assert max(t, len(largest_level(top))) ** 2 >= f.m


@settings(max_examples=150)
@given(st.lists(st.frozensets(st.integers(0, 6), max_size=7), max_size=14, unique=True))
def test_height_matches_subset_dp(sets):
    o = build_inclusion_order(SetFamily.from_sets(sets))
    assert decompose_levels(o).t == brute.longest_chain_length(sets)
