"""Threshold and selector formulas; p-length."""

import random
from fractions import Fraction

import pytest

from oracles import max_exponent_length
from rigidlab.formulas import eval_phi, eval_psi, p_length, psi_satisfiable, unfold_psi
from rigidlab.groups import Atom, GroupElement, build_group, random_member
from rigidlab.ordinals import Ordinal, build_layout
from rigidlab.trees import LabeledTree

ZERO = Ordinal(0, 0)


def small_group():
    layout = build_layout(4, 3, 2, 3, entry_cap=0)
    return build_group(layout, LabeledTree({(): 0}))


def wide_group():
    # entries below the higher ordinals give length-2 sequences, so the
    # thresholds at m = 2 become visible
    layout = build_layout(8, 2, 1, 2, entry_cap=2)
    return build_group(layout, LabeledTree({(): 0}))


def test_threshold_moves_across_the_last_entry():
    g = wide_group()
    length2 = [
        i for i in g.levels[1]
        if g.atoms[i].kind == "a" and len(g.atoms[i].seq) == 2
    ]
    assert length2
    for i in length2:
        atom = g.atoms[i]
        beta = atom.seq[1]
        u = g.atom_element(i)
        assert eval_phi(g, 0, 2, beta, u)
        assert not eval_phi(g, 0, 2, beta.successor(), u)


def test_zero_satisfies_every_threshold():
    g = small_group()
    zero = GroupElement.zero()
    for m in range(0, 3):
        for beta in [ZERO, Ordinal(0, 3), Ordinal(1, 5)]:
            if m == 0 and beta != ZERO:
                continue
            assert eval_phi(g, 0, m, beta, zero)
            assert eval_phi(g, 1, m, beta, zero)


def test_threshold_matches_support_inspection():
    g = wide_group()
    rng = random.Random(5)
    length1 = [
        i for i in g.levels[1]
        if g.atoms[i].kind == "a" and len(g.atoms[i].seq) == 1
    ]
    for _ in range(60):
        chosen = rng.sample(length1, rng.randint(1, 3))
        u = GroupElement.of({i: rng.randint(-3, 3) for i in chosen})
        for beta in [ZERO, Ordinal(0, 1), Ordinal(0, 8), Ordinal(0, 12)]:
            got = eval_phi(g, 0, 1, beta, u)
            if beta == ZERO:
                expected = True  # the whole length-1 layer is designated
            else:
                expected = all(g.atoms[i].seq[0] >= beta for i in u.support)
            assert got == expected


def test_threshold_is_monotone():
    g = wide_group()
    rng = random.Random(6)
    betas = sorted({Ordinal(0, k) for k in range(0, 16, 3)})
    for _ in range(40):
        u = random_member(g, rng)
        for m in (1, 2):
            values = [eval_phi(g, 0, m, b, u) for b in betas]
            # once false, later (larger) thresholds stay false
            for earlier, later in zip(values, values[1:]):
                assert earlier or not later


def test_selector_on_single_atoms():
    g = small_group()
    for n in (0, 1):
        for idx, ords in g.gsets[n].items():
            u = g.atom_element(idx)
            for alpha in ords:
                assert eval_psi(g, n, alpha, u)
            outside = [
                o for o in g.indexed_ordinals(n) if o not in ords
            ]
            for alpha in outside[:3]:
                assert not eval_psi(g, n, alpha, u)


def test_selector_on_combinations():
    g = small_group()
    n = 1
    idx1, idx2 = g.levels[n][0], g.levels[n][1]
    u = GroupElement.of({idx1: 3, idx2: -2})
    union = set(g.gsets[n][idx1]) | set(g.gsets[n][idx2])
    for alpha in g.indexed_ordinals(n):
        assert eval_psi(g, n, alpha, u) == (alpha in union)
    # fractional combinations never satisfy the characterization
    frac = GroupElement.of({idx1: Fraction(1, g.primes.p[(n, 0, 0)])})
    assert not eval_psi(g, n, next(iter(g.gsets[n][idx1])), frac)


def test_selector_respects_index_set_aliasing():
    g = small_group()
    rng = random.Random(9)
    for n in (0, 1):
        for idx, ords in g.gsets[n].items():
            for _ in range(10):
                u = random_member(g, rng)
                a1, a2 = ords[0], ords[-1]
                assert eval_psi(g, n, a1, u) == eval_psi(g, n, a2, u)


def test_unfold_agrees_on_safe_indices():
    g = small_group()
    rng = random.Random(10)
    for n in (0, 1):
        for _ in range(40):
            u = random_member(g, rng)
            for alpha in g.safe_indexed_ordinals(n):
                assert eval_psi(g, n, alpha, u) == unfold_psi(g, n, alpha, u)


def test_unfold_zero_is_false_like_the_characterization():
    g = small_group()
    zero = GroupElement.zero()
    alpha = g.safe_indexed_ordinals(0)[0]
    assert not eval_psi(g, 0, alpha, zero)
    assert not unfold_psi(g, 0, alpha, zero)
    # the divisibility part alone is satisfied by zero
    assert eval_phi(g, 0, 0, ZERO, zero)


def test_satisfiability_scan():
    g = small_group()
    for n in (0, 1):
        indexed = set(g.indexed_ordinals(n))
        block = n
        for offset in range(g.layout.block_capacity):
            alpha = Ordinal(block, offset)
            assert psi_satisfiable(g, n, alpha) == (alpha in indexed)


def test_member_check_is_enforced():
    g = small_group()
    bad = g.atom_element(0).scale(Fraction(1, 9973))
    with pytest.raises(ValueError):
        eval_psi(g, 0, ZERO, bad)
    with pytest.raises(ValueError):
        eval_phi(g, 0, 0, ZERO, bad)


def test_length_of_cyclic_and_sums():
    assert p_length([8], 2) == 3
    assert p_length([2, 4, 16], 2) == 4
    assert p_length([], 2) == 0
    assert p_length([3, 27], 3) == 3


def test_length_rejects_foreign_orders():
    with pytest.raises(ValueError):
        p_length([6], 2)
    with pytest.raises(ValueError):
        p_length([4], 4)  # not prime


def test_length_of_direct_sum_is_the_max():
    rng = random.Random(11)
    for p in (2, 3):
        for _ in range(40):
            a = [p ** rng.randint(1, 5) for _ in range(rng.randint(0, 3))]
            b = [p ** rng.randint(1, 5) for _ in range(rng.randint(0, 3))]
            assert p_length(a + b, p) == max(p_length(a, p), p_length(b, p))
            assert p_length(a, p) == max_exponent_length(a, p)
