"""Colorings of finite subsets and the search for shift-invariant
injective sequences.

A sequence sigma is shift-invariant for a coloring F when, at every
applicable length n >= 1, the color of its first n entries equals the
color of entries 1..n.  The searcher walks the tree of injective partial
attempts depth-first, smallest candidate first; the counter measures the
size of that attempt tree, which is the quantitative face of its
well-foundedness.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Optional


@dataclass(frozen=True)
class ColoringTable:
    """Total coloring of the subsets of {0..ground_size-1} up to a size cap."""

    ground_size: int
    subset_cap: int
    color: Mapping[frozenset, int]

    def __post_init__(self):
        for size in range(self.subset_cap + 1):
            for subset in combinations(range(self.ground_size), size):
                if frozenset(subset) not in self.color:
                    raise ValueError(f"coloring is not total: missing {set(subset)}")
        for subset, c in self.color.items():
            if len(subset) > self.subset_cap:
                raise ValueError(f"subset {set(subset)} exceeds the size cap")
            if not isinstance(c, int) or c < 0:
                raise ValueError("colors must be naturals")

    def of(self, xs) -> int:
        return self.color[frozenset(xs)]

    @staticmethod
    def _table(ground_size: int, subset_cap: int, fn) -> "ColoringTable":
        table = {}
        for size in range(subset_cap + 1):
            for subset in combinations(range(ground_size), size):
                table[frozenset(subset)] = fn(frozenset(subset))
        return ColoringTable(ground_size, subset_cap, table)

    @staticmethod
    def constant(ground_size: int, subset_cap: int, value: int = 0) -> "ColoringTable":
        return ColoringTable._table(ground_size, subset_cap, lambda s: value)

    @staticmethod
    def size_mod(ground_size: int, subset_cap: int, modulus: int = 2) -> "ColoringTable":
        return ColoringTable._table(ground_size, subset_cap, lambda s: len(s) % modulus)

    @staticmethod
    def max_element(ground_size: int, subset_cap: int) -> "ColoringTable":
        return ColoringTable._table(
            ground_size, subset_cap, lambda s: max(s) if s else 0
        )

    @staticmethod
    def random_table(
        ground_size: int, subset_cap: int, colors: int, seed: int
    ) -> "ColoringTable":
        rng = random.Random(seed)
        return ColoringTable._table(
            ground_size, subset_cap, lambda s: rng.randrange(colors)
        )


def satisfies_shift_condition(f: ColoringTable, seq: tuple[int, ...]) -> bool:
    """Independent checker for the defining condition of an attempt node."""
    if len(set(seq)) != len(seq):
        return False
    for n in range(1, len(seq)):
        if f.of(seq[:n]) != f.of(seq[1 : n + 1]):
            return False
    return True


def search_shift_invariant(
    f: ColoringTable, target_len: int
) -> Optional[tuple[int, ...]]:
    """First (depth-first, smallest-candidate-first) injective sequence of
    the requested length meeting the shift condition, or None."""
    if target_len < 0:
        raise ValueError("target length must be nonnegative")
    if target_len > f.subset_cap + 1:
        raise ValueError("target length exceeds what the coloring table can check")
    if target_len > f.ground_size:
        return None

    def extend(prefix: tuple[int, ...]) -> Optional[tuple[int, ...]]:
        if len(prefix) == target_len:
            return prefix
        for x in range(f.ground_size):
            if x in prefix:
                continue
            cand = prefix + (x,)
            n = len(cand) - 1
            if n >= 1 and f.of(cand[:n]) != f.of(cand[1 : n + 1]):
                continue
            got = extend(cand)
            if got is not None:
                return got
        return None

    found = extend(())
    if found is not None and not satisfies_shift_condition(f, found):
        raise AssertionError("internal error: search produced an invalid sequence")
    return found


def attempt_tree_size(f: ColoringTable, depth: int) -> int:
    """Number of attempt nodes (valid injective prefixes) of length <= depth."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if depth > f.subset_cap + 1:
        raise ValueError("depth exceeds what the coloring table can check")

    def count(prefix: tuple[int, ...]) -> int:
        total = 1
        if len(prefix) == depth:
            return total
        for x in range(f.ground_size):
            if x in prefix:
                continue
            cand = prefix + (x,)
            n = len(cand) - 1
            if n >= 1 and f.of(cand[:n]) != f.of(cand[1 : n + 1]):
                continue
            total += count(cand)
        return total

    return count(())
