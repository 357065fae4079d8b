"""Finite ordinal bookkeeping: blocks, interleaved index sets, and the
trees of strictly decreasing ordinal sequences.

Ordinals live below `block_count * block_capacity` and are kept as
(block, offset) pairs rather than flat naturals, so block arithmetic
stays explicit.  Each block is partitioned into `index_size` interleaved
sets g_n(nu) = {nu + k*index_size : k < layer_count}; an ordinal is
"safe" when every other interleaved set still contains something at or
above it, which is the finite stand-in for cofinality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator


@dataclass(frozen=True, order=True)
class Ordinal:
    """Ordinal surrogate `base*block + offset` with lexicographic order."""

    block: int
    offset: int

    def key(self) -> tuple[int, int]:
        return (self.block, self.offset)

    def successor(self) -> "Ordinal":
        return Ordinal(self.block, self.offset + 1)

    def to_doc(self) -> dict:
        return {"block": self.block, "offset": self.offset}

    @staticmethod
    def from_doc(doc: dict) -> "Ordinal":
        return Ordinal(int(doc["block"]), int(doc["offset"]))


@dataclass(frozen=True)
class BlockLayout:
    """Truncation geometry: N blocks of capacity L*D, interleaved D-deep.

    index_size L bounds how many atoms a level may carry (each needs its
    own interleaved set); layer_count D >= 2 guarantees a nonempty safe
    region; z_max_len caps decreasing-sequence length; entry_cap bounds
    how many ordinals below alpha are sampled as sequence entries.
    """

    index_size: int
    layer_count: int
    block_count: int
    z_max_len: int
    entry_cap: int = 6

    @property
    def block_capacity(self) -> int:
        return self.index_size * self.layer_count

    @property
    def top(self) -> Ordinal:
        return Ordinal(self.block_count - 1, self.block_capacity - 1)

    def validate_ordinal(self, a: Ordinal) -> None:
        if not (0 <= a.block < self.block_count):
            raise ValueError(f"ordinal block {a.block} outside layout")
        if not (0 <= a.offset < self.block_capacity):
            raise ValueError(f"ordinal offset {a.offset} outside block capacity")

    def ordinals(self) -> Iterator[Ordinal]:
        for n in range(self.block_count):
            for i in range(self.block_capacity):
                yield Ordinal(n, i)

    def g(self, n: int, nu: int) -> tuple[Ordinal, ...]:
        """The nu-th interleaved subset of block n."""
        if not (0 <= n < self.block_count):
            raise ValueError(f"block {n} outside layout")
        if not (0 <= nu < self.index_size):
            raise ValueError(f"index {nu} outside index size {self.index_size}")
        L = self.index_size
        return tuple(Ordinal(n, nu + k * L) for k in range(self.layer_count))

    def layer(self, a: Ordinal) -> int:
        return a.offset // self.index_size

    def to_doc(self) -> dict:
        return {
            "index_size": self.index_size,
            "layer_count": self.layer_count,
            "block_count": self.block_count,
            "z_max_len": self.z_max_len,
            "entry_cap": self.entry_cap,
        }

    @staticmethod
    def from_doc(doc: dict) -> "BlockLayout":
        return build_layout(
            int(doc["index_size"]),
            int(doc["layer_count"]),
            int(doc["block_count"]),
            int(doc["z_max_len"]),
            entry_cap=int(doc.get("entry_cap", 6)),
        )


def build_layout(L: int, D: int, N: int, z_max_len: int, entry_cap: int = 6) -> BlockLayout:
    if L < 1:
        raise ValueError("index size must be at least 1")
    if D < 2:
        raise ValueError("layer count must be at least 2: a single layer leaves no safe region")
    if N < 1:
        raise ValueError("block count must be at least 1")
    if z_max_len < 1:
        raise ValueError("sequence length cap must be at least 1")
    if entry_cap < 0:
        raise ValueError("entry cap must be nonnegative")
    return BlockLayout(L, D, N, z_max_len, entry_cap)


def is_safe(a: Ordinal, layout: BlockLayout) -> bool:
    """True when every interleaved set of a's block reaches a or beyond."""
    layout.validate_ordinal(a)
    return layout.layer(a) <= layout.layer_count - 2


def ordinals_below(a: Ordinal, layout: BlockLayout) -> list[Ordinal]:
    out = []
    cap = layout.block_capacity
    for n in range(a.block + 1):
        limit = cap if n < a.block else a.offset
        for i in range(limit):
            out.append(Ordinal(n, i))
    return out


def z_entries(a: Ordinal, layout: BlockLayout) -> tuple[Ordinal, ...]:
    """Sampled entry pool for decreasing sequences starting at a.

    Everything below a when that is small enough; otherwise an evenly
    spaced sample of entry_cap ordinals pinned to include the minimum
    and the immediate predecessor, which keeps the endpoint thresholds
    distinguishable.
    """
    below = ordinals_below(a, layout)
    cap = layout.entry_cap
    if len(below) <= cap:
        return tuple(below)
    if cap == 0:
        return ()
    if cap == 1:
        return (below[-1],)
    picks = sorted({round(t * (len(below) - 1) / (cap - 1)) for t in range(cap)})
    return tuple(below[i] for i in picks)


def z_sequences(a: Ordinal, layout: BlockLayout) -> list[tuple[Ordinal, ...]]:
    """All strictly decreasing sequences from {a} + sampled entries,
    starting at a, of length at most z_max_len.  Prefix-closed."""
    layout.validate_ordinal(a)
    pool = sorted(z_entries(a, layout), reverse=True)
    out: list[tuple[Ordinal, ...]] = []

    def extend(prefix: tuple[Ordinal, ...], start: int) -> None:
        out.append(prefix)
        if len(prefix) >= layout.z_max_len:
            return
        for i in range(start, len(pool)):
            if pool[i] < prefix[-1]:
                extend(prefix + (pool[i],), i + 1)

    extend((a,), 0)
    return sorted(out, key=lambda seq: (len(seq), tuple(o.key() for o in seq)))
