"""Embedding decision, witnesses, antichains; checked against naive maps."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import embeds_maps_oracle, random_labeled_tree
from rigidlab.trees import (
    LabeledTree,
    QuasiOrderTable,
    TreeMorphism,
    antichain_pairs,
    check_morphism,
    embeds,
    embeds_bruteforce,
    find_embedding,
)

CHAIN3 = QuasiOrderTable.chain([0, 1, 2])


def test_quasi_order_validation():
    with pytest.raises(ValueError):
        QuasiOrderTable(("a", "b"), frozenset({("a", "b")}))  # not reflexive
    with pytest.raises(ValueError):
        QuasiOrderTable(
            ("a", "b", "c"),
            frozenset({("a", "a"), ("b", "b"), ("c", "c"), ("a", "b"), ("b", "c")}),
        )  # not transitive
    q = QuasiOrderTable.chain([0, 1])
    assert q.leq(0, 1) and not q.leq(1, 0)


def test_tree_validation():
    with pytest.raises(ValueError):
        LabeledTree({(0,): 1})  # no root
    with pytest.raises(ValueError):
        LabeledTree({(): 0, (0, 0): 1})  # orphan


def test_single_roots_follow_the_label_order():
    t_low = LabeledTree({(): 0})
    t_high = LabeledTree({(): 1})
    assert embeds(t_low, t_high, CHAIN3)
    assert not embeds(t_high, t_low, CHAIN3)


def test_chain_cannot_embed_into_single_root():
    chain = LabeledTree({(): 0, (0,): 0})
    root = LabeledTree({(): 2})
    assert not embeds(chain, root, CHAIN3)


def test_identical_trees_give_identity_witness():
    t = LabeledTree({(): 0, (0,): 1, (1,): 2, (0, 0): 0})
    w = find_embedding(t, t, CHAIN3)
    assert w is not None
    assert dict(w.items()) == {n: n for n in t.labels}


def test_witness_absent_exactly_when_not_embedding():
    rng = random.Random(11)
    for _ in range(200):
        t1 = random_labeled_tree(rng, 6, [0, 1, 2])
        t2 = random_labeled_tree(rng, 6, [0, 1, 2])
        w = find_embedding(t1, t2, CHAIN3)
        assert (w is not None) == embeds(t1, t2, CHAIN3)
        if w is not None:
            assert check_morphism(t1, t2, CHAIN3, w)


def test_witnesses_are_deterministic():
    t1 = LabeledTree({(): 0, (0,): 1})
    t2 = LabeledTree({(): 0, (0,): 1, (1,): 1, (2,): 2})
    w = find_embedding(t1, t2, CHAIN3)
    # smallest qualifying target child wins the tie
    assert dict(w.items()) == {(): (), (0,): (0,)}


def test_agreement_with_map_enumeration_oracle():
    rng = random.Random(12)
    for _ in range(300):
        t1 = random_labeled_tree(rng, 5, [0, 1, 2])
        t2 = random_labeled_tree(rng, 5, [0, 1, 2])
        expected = embeds_maps_oracle(t1, t2, CHAIN3)
        assert embeds(t1, t2, CHAIN3) == expected
        assert embeds_bruteforce(t1, t2, CHAIN3) == expected


def test_morphism_checker_rejects_bad_maps():
    t1 = LabeledTree({(): 0, (0,): 1})
    t2 = LabeledTree({(): 0, (0,): 1, (0, 0): 1})
    assert not check_morphism(t1, t2, CHAIN3, TreeMorphism({(): (), (0,): (0, 0)}))
    assert not check_morphism(t1, t2, CHAIN3, TreeMorphism({(): ()}))
    t3 = LabeledTree({(): 0, (0,): 0})
    assert not check_morphism(
        t3, t3, None, TreeMorphism({(): (), (0,): (0,)}), require_label_equality=False
    )
    assert check_morphism(
        t3, t3, None, TreeMorphism({(): (), (0,): (0,)}), require_label_equality=True
    )


def test_antichain_pairs_examples():
    a = LabeledTree({(): 0})
    b = LabeledTree({(): 1})
    eq = QuasiOrderTable.equality([0, 1])
    assert antichain_pairs([a, b], eq) == []

    dup = LabeledTree({(): 0, (0,): 1})
    pairs = antichain_pairs([dup, dup, b], QuasiOrderTable.equality([0, 1]))
    assert (0, 1) in pairs and (1, 0) in pairs

    rng = random.Random(13)
    family = [random_labeled_tree(rng, 5, [0, 1, 2]) for _ in range(5)]
    pairs = antichain_pairs(family, CHAIN3)
    for i in range(5):
        for j in range(5):
            if i != j:
                assert ((i, j) in pairs) == embeds_maps_oracle(
                    family[i], family[j], CHAIN3
                )

    with pytest.raises(ValueError):
        antichain_pairs([], CHAIN3)


def test_label_outside_order_is_rejected():
    t = LabeledTree({(): 7})
    with pytest.raises(ValueError):
        embeds(t, t, CHAIN3)


# -- quasi-order properties of the relation itself ----------------------


@st.composite
def labeled_trees(draw, max_nodes=5):
    n = draw(st.integers(1, max_nodes))
    paths = [()]
    child_count = {(): 0}
    for _ in range(n - 1):
        parent = paths[draw(st.integers(0, len(paths) - 1))]
        path = parent + (child_count[parent],)
        child_count[parent] += 1
        child_count[path] = 0
        paths.append(path)
    labels = {p: draw(st.integers(0, 2)) for p in paths}
    return LabeledTree(labels)


@settings(max_examples=120, deadline=None)
@given(labeled_trees())
def test_relation_is_reflexive(t):
    assert embeds(t, t, CHAIN3)


@settings(max_examples=120, deadline=None)
@given(labeled_trees(), labeled_trees(), labeled_trees())
def test_relation_is_transitive(a, b, c):
    if embeds(a, b, CHAIN3) and embeds(b, c, CHAIN3):
        assert embeds(a, c, CHAIN3)


@settings(max_examples=120, deadline=None)
@given(labeled_trees(), labeled_trees(), st.randoms(use_true_random=False))
def test_raising_target_labels_preserves_embedding(t1, t2, rng):
    if not embeds(t1, t2, CHAIN3):
        return
    bumped = LabeledTree(
        {n: min(2, l + rng.randint(0, 1)) for n, l in t2.labels.items()}
    )
    assert embeds(t1, bumped, CHAIN3)
