"""Shift-invariant sequence search against permutation enumeration."""

import pytest

from oracles import attempt_count_oracle, shift_search_oracle
from rigidlab.partition import (
    ColoringTable,
    attempt_tree_size,
    satisfies_shift_condition,
    search_shift_invariant,
)


def test_constant_coloring_takes_the_first_sequence():
    f = ColoringTable.constant(5, 3)
    assert search_shift_invariant(f, 4) == (0, 1, 2, 3)


def test_size_only_coloring_never_blocks():
    f = ColoringTable.size_mod(5, 3, 2)
    assert search_shift_invariant(f, 4) == (0, 1, 2, 3)


def test_max_coloring_blocks_every_length_beyond_one():
    f = ColoringTable.max_element(6, 3)
    for target in range(2, 5):
        assert search_shift_invariant(f, target) is None
        assert shift_search_oracle(f, target) is None
    # the length-2 failure is forced: both sides of the condition at n=1
    # are singleton colors, so max{s0} = max{s1} forces equality
    for s0 in range(6):
        for s1 in range(6):
            if s0 != s1:
                assert not satisfies_shift_condition(f, (s0, s1))


def test_attempt_tree_counts():
    assert attempt_tree_size(ColoringTable.constant(3, 2), 3) == 16
    assert attempt_tree_size(ColoringTable.max_element(3, 1), 2) == 4
    assert attempt_tree_size(ColoringTable.random_table(4, 2, 3, seed=5), 0) == 1


def test_counts_match_enumeration_on_random_tables():
    for seed in range(20):
        f = ColoringTable.random_table(5, 3, 3, seed=seed)
        for depth in range(4):
            assert attempt_tree_size(f, depth) == attempt_count_oracle(f, depth)


def test_search_agrees_with_enumeration_on_random_tables():
    for seed in range(40):
        f = ColoringTable.random_table(6, 3, 4, seed=seed)
        for target in range(5):
            got = search_shift_invariant(f, target)
            expected = shift_search_oracle(f, target)
            assert got == expected


def test_found_iff_a_node_of_that_length_exists():
    for seed in range(20):
        f = ColoringTable.random_table(5, 3, 2, seed=seed)
        for target in range(5):
            found = search_shift_invariant(f, target)
            full = attempt_tree_size(f, target)
            shallower = attempt_tree_size(f, target - 1) if target else 0
            assert (found is not None) == (full - shallower > 0)


def test_returned_sequences_pass_the_independent_checker():
    for seed in range(30):
        f = ColoringTable.random_table(6, 3, 3, seed=seed)
        got = search_shift_invariant(f, 4)
        if got is not None:
            assert satisfies_shift_condition(f, got)


def test_injectivity_bound_and_cap():
    f = ColoringTable.constant(3, 3)
    assert search_shift_invariant(f, 4) is None  # longer than the ground set
    with pytest.raises(ValueError):
        search_shift_invariant(f, 5)  # beyond what the table can check
    with pytest.raises(ValueError):
        attempt_tree_size(f, 5)


def test_table_validation():
    with pytest.raises(ValueError):
        ColoringTable(3, 2, {frozenset(): 0})  # not total
    good = {frozenset(s): 0 for s in [(), (0,), (1,), (0, 1)]}
    ColoringTable(2, 2, good)
    bad = dict(good)
    bad[frozenset({0})] = -1
    with pytest.raises(ValueError):
        ColoringTable(2, 2, bad)
