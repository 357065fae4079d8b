"""Block layout, interleaved index sets, safe region, decreasing sequences."""

import pytest

from rigidlab.ordinals import (
    Ordinal,
    build_layout,
    is_safe,
    ordinals_below,
    z_entries,
    z_sequences,
)


def flat(o: Ordinal, layout) -> int:
    return o.block * layout.block_capacity + o.offset


def test_interleaved_set_formula():
    layout = build_layout(4, 3, 2, 3)
    assert [flat(o, layout) for o in layout.g(0, 1)] == [1, 5, 9]
    assert [flat(o, layout) for o in layout.g(1, 2)] == [14, 18, 22]


def test_interleaved_sets_partition_each_block():
    layout = build_layout(4, 3, 2, 3)
    for n in range(layout.block_count):
        seen = set()
        for nu in range(layout.index_size):
            g = set(layout.g(n, nu))
            assert not (seen & g)
            seen |= g
        assert len(seen) == layout.block_capacity


def test_rejects_single_layer():
    with pytest.raises(ValueError):
        build_layout(4, 1, 2, 3)


def test_safe_region_examples():
    layout = build_layout(2, 2, 1, 2)
    safe = [o for o in layout.ordinals() if is_safe(o, layout)]
    assert [o.offset for o in safe] == [0, 1]

    wide = build_layout(4, 3, 1, 2)
    assert is_safe(Ordinal(0, 2), wide)  # layer 0
    assert not is_safe(Ordinal(0, 2 + 2 * 4), wide)  # layer 2


def test_safe_layer_property_exhaustively():
    for L, D, N in [(2, 2, 2), (4, 3, 2), (3, 4, 1)]:
        layout = build_layout(L, D, N, 2)
        for a in layout.ordinals():
            if not is_safe(a, layout):
                continue
            for nu in range(L):
                assert max(layout.g(a.block, nu)) >= a


def test_total_order_is_lexicographic():
    assert Ordinal(0, 5) < Ordinal(1, 0) < Ordinal(1, 1)
    assert Ordinal(2, 0) > Ordinal(1, 99)


def test_sequences_at_the_bottom():
    layout = build_layout(4, 2, 1, 3)
    assert z_sequences(Ordinal(0, 0), layout) == [(Ordinal(0, 0),)]


def test_sequences_with_two_entries_below():
    layout = build_layout(4, 2, 1, 3)
    a = Ordinal(0, 2)
    got = z_sequences(a, layout)
    b0, b1 = Ordinal(0, 0), Ordinal(0, 1)
    assert set(got) == {(a,), (a, b0), (a, b1), (a, b1, b0)}
    assert len(got) == 4


def _decreasing_sequences_oracle(entries, start):
    """Brute-force enumeration over all subsets of the entry pool."""
    from itertools import combinations

    out = []
    pool = sorted(entries, reverse=True)
    for size in range(len(pool) + 1):
        for combo in combinations(pool, size):
            out.append((start,) + combo)
    return out


@pytest.mark.parametrize("m", range(0, 11))
def test_sequence_count_is_two_to_the_m(m):
    # with no applicable length cap, sequences below alpha biject with
    # subsets of the entries below it
    layout = build_layout(16, 2, 1, m + 1, entry_cap=16)
    a = Ordinal(0, m)
    got = z_sequences(a, layout)
    assert len(got) == 2 ** m
    oracle = _decreasing_sequences_oracle(ordinals_below(a, layout), a)
    assert sorted(got, key=lambda s: (len(s), tuple(o.key() for o in s))) == sorted(
        oracle, key=lambda s: (len(s), tuple(o.key() for o in s))
    )


def test_sequences_are_prefix_closed_and_capped():
    layout = build_layout(8, 2, 2, 2, entry_cap=4)
    for a in [Ordinal(0, 7), Ordinal(1, 3), Ordinal(1, 15)]:
        seqs = set(z_sequences(a, layout))
        for s in seqs:
            assert 1 <= len(s) <= layout.z_max_len
            assert s[0] == a
            assert all(s[i] > s[i + 1] for i in range(len(s) - 1))
            if len(s) > 1:
                assert s[:-1] in seqs


def test_entry_sample_keeps_the_endpoints():
    layout = build_layout(8, 2, 2, 3, entry_cap=4)
    a = Ordinal(1, 9)
    sample = z_entries(a, layout)
    assert len(sample) == 4
    assert Ordinal(0, 0) in sample
    assert Ordinal(1, 8) in sample
    assert all(o < a for o in sample)


def test_entry_sample_small_caps():
    layout0 = build_layout(4, 2, 1, 2, entry_cap=0)
    assert z_entries(Ordinal(0, 5), layout0) == ()
    layout1 = build_layout(4, 2, 1, 2, entry_cap=1)
    assert z_entries(Ordinal(0, 5), layout1) == (Ordinal(0, 4),)


def test_ordinal_doc_round_trip():
    o = Ordinal(2, 11)
    assert Ordinal.from_doc(o.to_doc()) == o
