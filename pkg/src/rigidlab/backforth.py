"""Partial-isomorphism games on finite abelian groups.

A family of finite partial isomorphisms with the mutual extension
property exists between two finite groups exactly when they are
isomorphic, so the greatest fixed point of the extension-pruning
operator is computed lazily: a memoized search explores only the states
reachable from the empty map under a fixed challenge order, which
decides membership of the empty map in the fixed point.  Atomic-formula
preservation is decided through relation lattices, not formula
enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod
from typing import Optional, Sequence

from .homs import group_elements, qf_type


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Direct sum of cyclic groups; elements are coordinate tuples."""

    orders: tuple[int, ...]

    def __post_init__(self):
        for m in self.orders:
            if m < 2:
                raise ValueError("cyclic orders must be at least 2")

    @property
    def size(self) -> int:
        return prod(self.orders) if self.orders else 1

    def elements(self) -> list[tuple[int, ...]]:
        return group_elements(self.orders)

    def add(self, x, y):
        return tuple((a + b) % m for a, b, m in zip(x, y, self.orders))

    def neg(self, x):
        return tuple((-a) % m for a, m in zip(x, self.orders))

    def zero(self):
        return tuple(0 for _ in self.orders)

    def scale(self, k: int, x):
        return tuple((k * a) % m for a, m in zip(x, self.orders))

    def element_order(self, x) -> int:
        out = 1
        for a, m in zip(x, self.orders):
            out = out * (m // gcd(a, m)) // gcd(out, m // gcd(a, m))
        return out

    def span(self, gens) -> set:
        seen = {self.zero()}
        frontier = [self.zero()]
        while frontier:
            cur = frontier.pop()
            for g in gens:
                nxt = self.add(cur, g)
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return seen


def invariant_factors(a: FiniteAbelianGroup) -> tuple[int, ...]:
    """Canonical divisibility chain, merged one prime at a time."""
    primary: dict[int, list[int]] = {}
    for m in a.orders:
        d = 2
        mm = m
        while d * d <= mm:
            if mm % d == 0:
                e = 0
                while mm % d == 0:
                    mm //= d
                    e += 1
                primary.setdefault(d, []).append(e)
            d += 1
        if mm > 1:
            primary.setdefault(mm, []).append(1)
    for p in primary:
        primary[p].sort(reverse=True)
    depth = max((len(v) for v in primary.values()), default=0)
    factors = []
    for k in range(depth):
        f = 1
        for p, exps in primary.items():
            if k < len(exps):
                f *= p ** exps[k]
        factors.append(f)
    return tuple(sorted(factors))


def is_partial_iso(
    a: FiniteAbelianGroup, b: FiniteAbelianGroup, pairs: Sequence[tuple[tuple, tuple]]
) -> bool:
    """Atomic-formula preservation, via relation-lattice equality."""
    dom = [x for x, _ in pairs]
    rng = [y for _, y in pairs]
    if len(set(dom)) != len(dom) or len(set(rng)) != len(rng):
        return False
    return qf_type(a.orders, dom) == qf_type(b.orders, rng)


def _extend_subgroup_iso(
    a: FiniteAbelianGroup,
    b: FiniteAbelianGroup,
    iso: dict,
    x,
    y,
) -> Optional[dict]:
    """Extend a full subgroup isomorphism by the pair (x, y), or None.

    iso maps the whole of a generated subgroup; the extension exists
    exactly when x and y have the same order modulo it and the coset
    relations match, which reproduces atomic-formula preservation.
    """
    if x in iso:
        return iso if iso[x] == y else None
    image = set(iso.values())
    if y in image:
        return None
    kx = 1
    px = x
    while px not in iso:
        px = a.add(px, x)
        kx += 1
    ky = 1
    py = y
    while py not in image and ky <= kx:
        py = b.add(py, y)
        ky += 1
    if ky != kx or iso[px] != py:
        return None
    out = dict(iso)
    for base, image in list(iso.items()):
        cx, cy = base, image
        for _ in range(1, kx):
            cx = a.add(cx, x)
            cy = b.add(cy, y)
            if cx in out:
                if out[cx] != cy:
                    return None
            else:
                out[cx] = cy
    return out


def ef_equiv(a: FiniteAbelianGroup, b: FiniteAbelianGroup) -> bool:
    """Whether an extension-closed family of partial isomorphisms exists.

    Computed as lazy greatest-fixed-point membership of the empty map:
    a state survives when every challenge admits a surviving extension,
    and over finite groups the surviving states are exactly the
    restrictions of isomorphisms, so the search doubles as an
    isomorphism search with relation-lattice pruning.
    """
    if a.size != b.size:
        return False
    elems_a = a.elements()
    elems_b = b.elements()
    memo: dict[frozenset, bool] = {}

    def survives(iso: dict) -> bool:
        key = frozenset(iso.items())
        got = memo.get(key)
        if got is not None:
            return got
        missing = [x for x in elems_a if x not in iso]
        if not missing:
            result = len(set(iso.values())) == b.size
            memo[key] = result
            return result
        x = missing[0]
        memo[key] = False  # cycle guard; overwritten on success
        for y in elems_b:
            if y in iso.values():
                continue
            if a.element_order(x) != b.element_order(y):
                continue
            extended = _extend_subgroup_iso(a, b, iso, x, y)
            if extended is not None and survives(extended):
                memo[key] = True
                return True
        return False

    return survives({a.zero(): b.zero()})
