import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import brute
from unionfree import (
    CapabilityError,
    SetFamily,
    erdos_shelah,
    is_a_union_free,
    is_union_free,
    max_a_union_free_exact,
    max_union_free_exact,
    random_family,
)
from unionfree.oracle import OracleLimits, expressible_as_union


def fam(*sets):
    return SetFamily.from_sets(sets)


def test_union_free_examples():
    r = max_union_free_exact(fam([1], [2], [1, 2]))
    assert r.optimum == 2 and len(r.witness) == 2 and not r.time_limit_hit
    assert max_union_free_exact(fam()).optimum == 0


@pytest.mark.parametrize("n, variant, expected", [
    (2, "square", 3), (3, "square", 5), (4, "square", 7),
    (2, "rect", 4), (3, "rect", 6),
    (3, "square_minus", 4), (2, "rect_minus", 3),
])
def test_grid_optima(n, variant, expected):
    f = erdos_shelah(n, variant)
    r = max_union_free_exact(f)
    assert r.optimum == expected
    assert is_union_free(f, r.witness)


def test_a_oracle_examples():
    f = fam([1], [2], [3], [1, 2, 3])
    assert max_a_union_free_exact(f, 3).optimum == 3
    assert max_a_union_free_exact(f, 2).optimum == 4
    assert max_a_union_free_exact(f, 4).optimum == 4
    assert max_a_union_free_exact(erdos_shelah(3), 9).optimum == 9


def test_expressible_examples():
    f = fam([1], [2], [3], [1, 2, 3])
    assert expressible_as_union(f, range(4), 3, 3)
    assert not expressible_as_union(f, [0, 1, 3], 3, 3)
    g = fam([1], [1, 2])
    assert not expressible_as_union(g, [0, 1], 1, 2)


def test_capability_limits(monkeypatch):
    f = random_family(0, 23, 8, 0.5)
    with pytest.raises(CapabilityError):
        max_union_free_exact(f)
    g = random_family(0, 19, 8, 0.5)
    with pytest.raises(CapabilityError):
        max_a_union_free_exact(g, 2)
    monkeypatch.setenv("UNIONFREE_ORACLE_LIMIT", "10")
    with pytest.raises(CapabilityError):
        max_union_free_exact(random_family(0, 11, 6, 0.5))
    monkeypatch.setenv("UNIONFREE_ORACLE_LIMIT", "30")
    assert max_union_free_exact(f).optimum >= 1
    assert max_union_free_exact(f, OracleLimits(max_members=23)).optimum >= 1


def test_timeout_is_flagged():
    f = random_family(1, 28, 7, mode="interval")
    r = max_union_free_exact(f, OracleLimits(max_members=40, time_limit=0.0))
    assert r.time_limit_hit
    assert r.to_dict()["partial"] is True
    assert is_union_free(f, r.witness)


def test_deterministic():
    f = random_family(4, 18, 6, mode="interval")
    assert max_union_free_exact(f) == max_union_free_exact(f)


def test_monotone_under_adding_sets():
    rng = random.Random(8)
    for seed in range(30):
        f = random_family(seed, 12, 6, mode="interval")
        sets = f.sets()
        sub = SetFamily.from_sets(sets[:-1])
        assert max_union_free_exact(sub).optimum <= max_union_free_exact(f).optimum
        a = rng.randint(2, 4)
        assert max_a_union_free_exact(sub, a).optimum <= max_a_union_free_exact(f, a).optimum


@settings(max_examples=80, deadline=None)
@given(st.lists(st.frozensets(st.integers(0, 5), max_size=6), max_size=10, unique=True))
def test_union_oracle_matches_brute_force(sets):
    f = SetFamily.from_sets(sets)
    r = max_union_free_exact(f)
    assert r.optimum == brute.max_union_free(sets)
    assert len(r.witness) == r.optimum and is_union_free(f, r.witness)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.frozensets(st.integers(0, 4), max_size=5), max_size=9, unique=True), st.integers(2, 4))
def test_a_oracle_matches_brute_force(sets, a):
    f = SetFamily.from_sets(sets)
    r = max_a_union_free_exact(f, a)
    assert r.optimum == brute.max_a_union_free(sets, a)
    assert len(r.witness) == r.optimum and is_a_union_free(f, r.witness, a)
