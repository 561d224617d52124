import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import brute
from unionfree import (
    CapabilityError,
    ParseError,
    SetFamily,
    classify_structure,
    is_a_degenerate,
    is_a_union_free,
    is_union_free,
    parse_family,
    serialize_family,
)
from unionfree.family import covers_within, expressible_as_union

small_sets = st.frozensets(st.integers(0, 5), max_size=6)
small_families = st.lists(small_sets, max_size=9, unique=True)


def fam(*sets):
    return SetFamily.from_sets(sets)


# --- parsing ---------------------------------------------------------------

def test_parse_collapses_duplicates():
    f = parse_family("1 2\n2 3\n1 2")
    assert f.sets() == [[1, 2], [2, 3]]
    assert f.dropped_duplicates == 1


def test_parse_empty_input():
    assert parse_family("").m == 0


def test_parse_json():
    f = parse_family('{"sets": [[1], [2], [1, 2]]}')
    assert f.m == 3
    assert f.sets() == [[1], [2], [1, 2]]


def test_parse_json_labels():
    f = parse_family('{"sets": [[1], [2], [1]], "labels": ["a", "b", "c"]}')
    assert f.names == ("a", "b")


def test_parse_comments_blank_lines_and_empty_set():
    f = parse_family("# header\n\n1 2  # trailing\n-\n")
    assert f.sets() == [[1, 2], []]


def test_parse_reports_line_of_bad_token():
    with pytest.raises(ParseError) as info:
        parse_family("1 2\n3 x\n")
    assert info.value.line == 2


def test_parse_rejects_negative():
    with pytest.raises(ParseError) as info:
        parse_family("1\n-4 2\n")
    assert info.value.line == 2
    with pytest.raises(ParseError):
        parse_family('{"sets": [[-1]]}')


def test_parse_rejects_bad_json_shape():
    with pytest.raises(ParseError):
        parse_family('{"sets": 3}')
    with pytest.raises(ParseError):
        parse_family('{"sets": [[1, "a"]]}')


def test_universe_is_dense():
    f = fam([10, 30], [20])
    assert f.labels == (10, 20, 30)
    assert f.members == (0b101, 0b010)
    assert f.index_of([30, 10]) == 0
    assert f.index_of([99]) is None


@given(small_families)
def test_parse_serialize_roundtrip(sets):
    f = SetFamily.from_sets(sets)
    for fmt in ("text", "json"):
        again = parse_family(serialize_family(f, fmt))
        assert again.sets() == f.sets()
        assert serialize_family(again, fmt) == serialize_family(f, fmt)


# --- predicates ------------------------------------------------------------

def test_union_free_examples():
    assert not is_union_free(fam([1], [2], [1, 2]))
    assert is_union_free(fam([1], [1, 2], [1, 3]))
    assert is_union_free(fam([1], [1, 2], [1, 2, 3]))


def test_union_free_respects_selection():
    f = fam([1], [2], [1, 2])
    assert is_union_free(f, [0, 2])
    assert is_union_free(f, [0, 1])


def test_a_union_free_examples():
    f = fam([1], [2], [3], [1, 2, 3])
    assert not is_a_union_free(f, None, 3)
    assert is_a_union_free(f, None, 2)


def test_a_union_free_small_selection_trivially_true():
    f = fam([1], [2], [1, 2])
    assert is_a_union_free(f, [0, 1], 2)
    assert is_a_union_free(f, None, 3)


def test_a_union_free_size_guard():
    f = SetFamily.from_sets([[k] for k in range(30)])
    with pytest.raises(CapabilityError):
        is_a_union_free(f, None, 2)
    assert is_a_union_free(f, None, 2, limit=30)


def test_a_union_free_padding():
    # {1,2,3} is covered by two sets; a = 3 pads with a third proper subset
    f = fam([1, 2], [3], [1], [1, 2, 3])
    assert not is_a_union_free(f, None, 3)
    assert is_a_union_free(f, [0, 1, 3], 3)


def test_expressible_as_union():
    f = fam([1], [2], [3], [1, 2, 3])
    assert expressible_as_union(f, [0, 1, 2, 3], 3, 3)
    assert not expressible_as_union(f, [0, 1, 3], 3, 3)
    g = fam([1], [1, 2])
    assert not expressible_as_union(g, [0, 1], 1, 2)


def test_covers_within():
    assert covers_within(0b111, [0b011, 0b110, 0b001], 2)
    assert not covers_within(0b111, [0b001, 0b010, 0b100], 2)
    assert not covers_within(0b111, [0b001, 0b010], 5)


def test_a_degenerate_examples():
    antichain = fam([1], [2], [3], [4])
    for a in range(1, 5):
        assert is_a_degenerate(antichain, None, a)
    chain = fam([1], [1, 2], [1, 2, 3], [1, 2, 3, 4])
    assert not is_a_degenerate(chain, None, 3)
    assert is_a_degenerate(chain, None, 4)
    assert is_a_degenerate(chain, [0, 1], 2)


def test_classify_structure():
    assert classify_structure(fam([1], [1, 2], [1, 2, 3])) == "chain"
    assert classify_structure(fam([1], [2], [3])) == "antichain"
    assert classify_structure(fam([1], [1, 2], [3])) == "neither"
    assert classify_structure(fam([1])) == "chain"
    assert classify_structure(fam()) == "chain"


@settings(max_examples=300)
@given(small_families)
def test_union_free_agrees_with_brute_force(sets):
    f = SetFamily.from_sets(sets)
    assert is_union_free(f) == brute.union_free(sets)


@settings(max_examples=300)
@given(small_families)
def test_union_free_equals_two_union_free(sets):
    f = SetFamily.from_sets(sets)
    assert is_union_free(f) == is_a_union_free(f, None, 2)


@settings(max_examples=200)
@given(st.lists(small_sets, max_size=8, unique=True), st.integers(2, 4))
def test_a_union_free_agrees_with_brute_force(sets, a):
    f = SetFamily.from_sets(sets)
    assert is_a_union_free(f, None, a) == brute.a_union_free(sets, a)


def test_degenerate_implies_a_union_free():
    rng = random.Random(7)
    checked = 0
    while checked < 1000:
        sets = {frozenset(x for x in range(6) if rng.random() < 0.5) for _ in range(rng.randint(1, 14))}
        f = SetFamily.from_sets(sets)
        a = rng.randint(2, 4)
        sel = [i for i in range(f.m) if rng.random() < 0.7]
        if not is_a_degenerate(f, sel, a):
            continue
        checked += 1
        assert is_a_union_free(f, sel, a)


@given(small_families, st.integers(1, 4))
def test_chains_and_antichains(sets, a):
    f = SetFamily.from_sets(sets)
    kind = classify_structure(f)
    if kind == "antichain":
        assert is_a_degenerate(f, None, a)
    if kind in ("chain", "antichain"):
        assert is_union_free(f)
