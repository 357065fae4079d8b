"""Finite-rank truncations of the divisibility-built torsion-free groups.

A truncated group is a subgroup of a rational vector space with one
basis atom per node of a layered index structure: level 0 holds a single
origin atom; level t holds one atom per decreasing ordinal sequence
(`a`-atoms) and one per (ordinal, tree node) pair (`b`-atoms), the
ordinals drawn from the previous level's interleaved index sets.  The
group itself is generated by designated vectors made infinitely
divisible by designated primes: single atoms, consecutive-sequence
pairs, and label-tagged tree-chain pairs.

Membership and p-power divisibility are decided exactly, prime by
prime, through saturated integer lattices; `decompose` returns the
certificate form of the membership decision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from . import kernels
from .ordinals import BlockLayout, Ordinal, z_sequences
from .trees import LabeledTree


def primes_stream():
    """2, 3, 5, ... by trial division; plenty for table sizes used here."""
    found = []
    n = 2
    while True:
        if all(n % p for p in found):
            found.append(n)
            yield n
        n += 1


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeTable:
    """Distinct primes for the two index families, with no overlap.

    Defaults assign consecutive primes along a fixed diagonal ordering of
    the index space, sequence-family indices first, so equal bounds give
    equal tables and builds stay reproducible.
    """

    p: Mapping[tuple[int, int, int], int]
    q: Mapping[tuple[int, int, int, int], int]

    def __post_init__(self):
        seen = {}
        for key, prime in list(self.p.items()) + list(self.q.items()):
            if not _is_prime(prime):
                raise ValueError(f"{prime} assigned to {key} is not prime")
            if prime in seen:
                raise ValueError(f"prime {prime} assigned to both {seen[prime]} and {key}")
            seen[prime] = key

    @staticmethod
    def assign(block_count: int, seq_len_max: int, tree_height_max: int,
               label_max: int) -> "PrimeTable":
        p_keys = sorted(
            ((n, m, j)
             for n in range(block_count)
             for m in range(seq_len_max + 1)
             for j in (0, 1)),
            key=lambda k: (k[0] + k[1], k),
        )
        q_keys = sorted(
            ((n, m, l, j)
             for n in range(block_count)
             for m in range(tree_height_max + 1)
             for l in range(label_max + 1)
             for j in (0, 1)),
            key=lambda k: (k[0] + k[1] + k[2], k),
        )
        gen = primes_stream()
        p = {k: next(gen) for k in p_keys}
        q = {k: next(gen) for k in q_keys}
        return PrimeTable(p, q)

    @staticmethod
    def for_trees(layout: BlockLayout, trees: Iterable[LabeledTree]) -> "PrimeTable":
        trees = list(trees)
        height = max((t.height() for t in trees), default=0)
        label = 0
        for t in trees:
            for l in t.labels.values():
                if not isinstance(l, int) or l < 0:
                    raise ValueError("tree labels must be naturals for group builds")
                label = max(label, l)
        return PrimeTable.assign(layout.block_count, layout.z_max_len, height, label)

    def all_primes(self) -> list[int]:
        return sorted(set(self.p.values()) | set(self.q.values()))

    def to_doc(self) -> dict:
        return {
            "p": [[list(k), v] for k, v in sorted(self.p.items())],
            "q": [[list(k), v] for k, v in sorted(self.q.items())],
        }

    @staticmethod
    def from_doc(doc: dict) -> "PrimeTable":
        return PrimeTable(
            {tuple(k): v for k, v in doc["p"]},
            {tuple(k): v for k, v in doc["q"]},
        )


@dataclass(frozen=True)
class Atom:
    """Basis atom: origin, sequence atom a[alpha; z], or tree atom b[alpha; eta]."""

    level: int
    kind: str  # "a" or "b"
    alpha: Optional[Ordinal]
    seq: tuple

    def sort_key(self):
        akey = self.alpha.key() if self.alpha is not None else (-1, -1)
        if self.kind == "a":
            skey = tuple(o.key() for o in self.seq)
        else:
            skey = tuple(self.seq)
        return (self.level, 0 if self.kind == "a" else 1, akey, skey)

    def name(self) -> str:
        if self.level == 0:
            return "a0"
        a = f"{self.alpha.block}.{self.alpha.offset}"
        if self.kind == "a":
            body = ",".join(f"{o.block}.{o.offset}" for o in self.seq)
        else:
            body = ",".join(str(i) for i in self.seq)
        return f"{self.kind}[{a}|{body}]"


ORIGIN = Atom(0, "a", None, ())


@dataclass(frozen=True)
class GroupElement:
    """Exact rational combination of atoms, keyed by atom index.

    Canonical: no zero coefficients, indices ascending, fractions in
    lowest terms (fractions.Fraction guarantees the last).
    """

    coeffs: tuple[tuple[int, Fraction], ...]

    @staticmethod
    def of(data: Mapping[int, Fraction | int] | Iterable[tuple[int, Fraction | int]]) -> "GroupElement":
        items = data.items() if isinstance(data, Mapping) else data
        acc: dict[int, Fraction] = {}
        for idx, c in items:
            c = Fraction(c)
            if c:
                acc[idx] = acc.get(idx, Fraction(0)) + c
        return GroupElement(tuple(sorted((i, c) for i, c in acc.items() if c)))

    @staticmethod
    def zero() -> "GroupElement":
        return GroupElement(())

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.coeffs)

    def get(self, idx: int) -> Fraction:
        for i, c in self.coeffs:
            if i == idx:
                return c
        return Fraction(0)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for _, c in self.coeffs)

    def __add__(self, other: "GroupElement") -> "GroupElement":
        acc = dict(self.coeffs)
        for i, c in other.coeffs:
            acc[i] = acc.get(i, Fraction(0)) + c
        return GroupElement.of(acc)

    def __neg__(self) -> "GroupElement":
        return GroupElement(tuple((i, -c) for i, c in self.coeffs))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def scale(self, s: Fraction | int) -> "GroupElement":
        s = Fraction(s)
        if not s:
            return GroupElement.zero()
        return GroupElement(tuple((i, c * s) for i, c in self.coeffs))

    def __rmul__(self, s):
        return self.scale(s)


@dataclass(frozen=True)
class Family:
    """One designated generator family: a prime and its vectors.

    Vectors are integer atom combinations; `singleton` families consist
    of single atoms and are exactly the support-constraining ones.
    """

    prime: int
    tag: str
    vectors: tuple[GroupElement, ...]

    @property
    def singleton(self) -> bool:
        return all(len(v.coeffs) == 1 and v.coeffs[0][1] == 1 for v in self.vectors)

    def atom_indices(self) -> set[int]:
        out: set[int] = set()
        for v in self.vectors:
            out.update(v.support)
        return out


class CapacityError(ValueError):
    pass


@dataclass(frozen=True)
class TruncatedGroup:
    layout: BlockLayout
    tree: LabeledTree
    primes: PrimeTable
    atoms: tuple[Atom, ...]
    levels: tuple[tuple[int, ...], ...]
    gsets: tuple[Mapping[int, tuple[Ordinal, ...]], ...]
    families: Mapping[int, Family]
    include_b: bool
    b_max_level: int
    subset: Optional[tuple[int, ...]] = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    def atom_index(self, atom: Atom) -> int:
        idx = self._cache.setdefault("index", {a: i for i, a in enumerate(self.atoms)})
        return idx[atom]

    def has_atom(self, atom: Atom) -> bool:
        idx = self._cache.setdefault("index", {a: i for i, a in enumerate(self.atoms)})
        return atom in idx

    def atom_element(self, atom: Atom | int) -> GroupElement:
        idx = atom if isinstance(atom, int) else self.atom_index(atom)
        return GroupElement.of({idx: 1})

    def alias(self, alpha: Ordinal) -> Optional[int]:
        """The level-n atom whose interleaved index set contains alpha."""
        table = self._cache.get("alias")
        if table is None:
            table = {}
            for level_sets in self.gsets:
                for idx, ords in level_sets.items():
                    for o in ords:
                        table[o] = idx
            self._cache["alias"] = table
        return table.get(alpha)

    def indexed_ordinals(self, n: int) -> tuple[Ordinal, ...]:
        """Y_n: the ordinals of block n handed to level-n atoms."""
        out: set[Ordinal] = set()
        for ords in self.gsets[n].values():
            out.update(ords)
        return tuple(sorted(out))

    def safe_indexed_ordinals(self, n: int) -> tuple[Ordinal, ...]:
        """Indexed ordinals of block n below every used set's maximum.

        Sets left empty by a subset restriction smaller than the level
        are ignored: they can never reach any ordinal."""
        sets = [ords for ords in self.gsets[n].values() if ords]
        if not sets:
            return ()
        ceiling = min(max(ords) for ords in sets)
        return tuple(o for o in self.indexed_ordinals(n) if o <= ceiling)

    def dense(self, x: GroupElement) -> list[Fraction]:
        out = [Fraction(0)] * self.n_atoms
        for i, c in x.coeffs:
            if not (0 <= i < self.n_atoms):
                raise ValueError(f"coefficient index {i} outside the atom basis")
            out[i] = c
        return out

    # -- per-prime exact machinery -------------------------------------

    def family_rows(self, p: int) -> list[list[int]]:
        fam = self.families.get(p)
        if fam is None:
            return []
        rows = []
        for v in fam.vectors:
            row = [0] * self.n_atoms
            for i, c in v.coeffs:
                row[i] = int(c)
            rows.append(row)
        return rows

    def span_functionals(self, p: int) -> list[list[int]]:
        """Integer functionals vanishing exactly on the designated span."""
        cache = self._cache.setdefault("funcs", {})
        if p not in cache:
            cache[p] = kernels.right_kernel_lattice(self.family_rows(p), self.n_atoms)
        return cache[p]

    def saturation_basis(self, p: int) -> list[list[int]]:
        """HNF basis of (rational designated span) intersected with Z^n."""
        cache = self._cache.setdefault("sat", {})
        if p not in cache:
            funcs = self.span_functionals(p)
            cache[p] = kernels.right_kernel_lattice(funcs, self.n_atoms)
        return cache[p]

    def saturation_exponent(self, p: int) -> int:
        """Max power of p among the designated family's elementary divisors."""
        cache = self._cache.setdefault("satexp", {})
        if p not in cache:
            diag = kernels.smith_normal_form(self.family_rows(p), self.n_atoms)
            e = 0
            for d in diag:
                k = 0
                while d % p == 0:
                    d //= p
                    k += 1
                e = max(e, k)
            cache[p] = e
        return cache[p]

    def _membership_lattice(self, p: int, e: int):
        cache = self._cache.setdefault("memlat", {})
        key = (p, e)
        if key not in cache:
            lat = kernels.IntLattice(self.n_atoms)
            for row in self.saturation_basis(p):
                lat.add(row)
            pe = p ** e
            for i in range(self.n_atoms):
                unit = [0] * self.n_atoms
                unit[i] = pe
                lat.add(unit)
            cache[key] = lat
        return cache[key]


def _fractional_profile(g: TruncatedGroup, x: GroupElement) -> Optional[dict[int, tuple[int, list[int]]]]:
    """Split denominators prime by prime.

    Returns {p: (e, w)} where w is the integer numerator vector of the
    p-fractional part scaled by p^e, or None when a denominator uses a
    prime outside the group's tables (such x can never belong).
    """
    table = sorted(g.families)
    profile: dict[int, dict[int, int]] = {}
    emax: dict[int, int] = {}
    for idx, c in x.coeffs:
        den = c.denominator
        if den == 1:
            continue
        num = c.numerator
        for p in table:
            e = 0
            while den % p == 0:
                den //= p
                e += 1
            if e:
                pe = p ** e
                rest = c.denominator // pe
                u = (num * pow(rest, -1, pe)) % pe
                profile.setdefault(p, {})[idx] = u
                emax[p] = max(emax.get(p, 0), e)
        if den != 1:
            return None
    out: dict[int, tuple[int, list[int]]] = {}
    for p, coords in profile.items():
        e = emax[p]
        w = [0] * g.n_atoms
        for idx, u in coords.items():
            ei = 0
            d = x.get(idx).denominator
            while d % p == 0:
                d //= p
                ei += 1
            w[idx] = u * p ** (e - ei)
        out[p] = (e, w)
    return out


def contains(g: TruncatedGroup, x: GroupElement) -> bool:
    """Exact membership in the generated subgroup.

    Decided prime by prime: the p-fractional part must land in the
    saturation of p's designated span modulo p-power integers.
    """
    profile = _fractional_profile(g, x)
    if profile is None:
        return False
    for p, (e, w) in profile.items():
        lat = g._membership_lattice(p, e)
        if not lat.contains(w):
            return False
    return True


def divides_pinf(g: TruncatedGroup, p: int, x: GroupElement) -> bool:
    """Whether x is divisible by every power of p inside the group.

    For members this is equivalent to lying in the rational span of p's
    designated vectors (iterated division never leaves that span, and
    inside it every division stays in the group).
    """
    if not contains(g, x):
        raise ValueError("element is not a member of the group")
    if g.families.get(p) is None:
        return x.is_zero()
    dense = g.dense(x)
    for func in g.span_functionals(p):
        s = Fraction(0)
        for i, fi in enumerate(func):
            if fi and dense[i]:
                s += fi * dense[i]
        if s:
            return False
    return True


def decompose(g: TruncatedGroup, x: GroupElement) -> tuple[dict[int, GroupElement], GroupElement]:
    """Certificate form of membership: x = remainder + sum of parts,
    the remainder integral, each part a p-power-denominator combination
    of that prime's designated vectors.  Re-summing is exact."""
    profile = _fractional_profile(g, x)
    if profile is None or not contains(g, x):
        raise ValueError("element is not a member of the group")
    parts: dict[int, GroupElement] = {}
    for p, (e, w) in sorted(profile.items()):
        K = e + g.saturation_exponent(p)
        fam = g.families[p]
        lat = kernels.IntLattice(g.n_atoms, track=True)
        rows = g.family_rows(p)
        for row in rows:
            lat.add(row)
        pk = p ** K
        for i in range(g.n_atoms):
            unit = [0] * g.n_atoms
            unit[i] = pk
            lat.add(unit)
        target = [wi * p ** (K - e) for wi in w]
        rem, combo = lat.reduce(target)
        if any(rem):
            raise AssertionError("membership certificate extraction failed")
        part = GroupElement.zero()
        for j, coef in sorted(combo.items()):
            if j < len(rows) and coef:
                part = part + fam.vectors[j].scale(Fraction(coef, pk))
        parts[p] = part
    remainder = x
    for part in parts.values():
        remainder = remainder - part
    if not remainder.is_integral():
        raise AssertionError("decomposition remainder is not integral")
    return parts, remainder


# -- construction ------------------------------------------------------


def _sequence_parent(g_atoms: dict, level: int, alpha: Ordinal, z: tuple,
                     alias: dict) -> int:
    if len(z) == 1:
        return alias[alpha]
    return g_atoms[Atom(level, "a", alpha, z[:-1])]


def build_group(
    layout: BlockLayout,
    tree: LabeledTree,
    primes: Optional[PrimeTable] = None,
    include_b: bool = True,
    b_max_level: Optional[int] = None,
    block1_subset: Optional[tuple[int, ...]] = None,
) -> TruncatedGroup:
    """Assemble the truncated group over a layout and a labeled tree.

    b_max_level caps the levels carrying tree atoms (default: all).
    block1_subset restricts block-1 indexing to a fixed offset subset;
    the subset's shifted copy then becomes the whole of Y_1 (used by the
    distinct-subset family construction, which also sets include_b=False).
    """
    N = layout.block_count
    L = layout.index_size
    if b_max_level is None:
        b_max_level = N
    for node, label in tree.labels.items():
        if not isinstance(label, int) or label < 0:
            raise ValueError("tree labels must be naturals")
    if primes is None:
        primes = PrimeTable.for_trees(layout, [tree])
    if block1_subset is not None:
        if N < 2:
            raise ValueError("block-1 subset restriction needs at least two blocks")
        for gamma in block1_subset:
            if not (0 <= gamma < layout.block_capacity):
                raise ValueError(f"subset offset {gamma} outside block capacity")

    tree_nodes = [n for n in sorted(tree.labels) if n]

    atoms: list[Atom] = [ORIGIN]
    index: dict[Atom, int] = {ORIGIN: 0}
    levels: list[list[int]] = [[0]]
    gsets: list[dict[int, tuple[Ordinal, ...]]] = []
    alias: dict[Ordinal, int] = {}

    def assign_gsets(level: int) -> None:
        members = levels[level]
        if len(members) > L:
            raise CapacityError(
                f"level {level} holds {len(members)} atoms but the index size is {L}"
            )
        sets: dict[int, tuple[Ordinal, ...]] = {}
        if level == 1 and block1_subset is not None:
            shifted = sorted((Ordinal(1, gamma) for gamma in set(block1_subset)), reverse=True)
            dealt: list[list[Ordinal]] = [[] for _ in members]
            for rank, o in enumerate(shifted):
                dealt[rank % len(members)].append(o)
            for nu, idx in enumerate(members):
                sets[idx] = tuple(sorted(dealt[nu]))
        else:
            for nu, idx in enumerate(members):
                sets[idx] = layout.g(level, nu)
        gsets.append(sets)
        for idx, ords in sets.items():
            for o in ords:
                alias[o] = idx

    assign_gsets(0)

    for t in range(1, N + 1):
        pool = sorted({o for ords in gsets[t - 1].values() for o in ords})
        new_atoms: list[Atom] = []
        for alpha in pool:
            for z in z_sequences(alpha, layout):
                new_atoms.append(Atom(t, "a", alpha, tuple(z)))
        if include_b and t <= b_max_level:
            for alpha in pool:
                for eta in tree_nodes:
                    new_atoms.append(Atom(t, "b", alpha, eta))
        new_atoms.sort(key=Atom.sort_key)
        levels.append([])
        for atom in new_atoms:
            index[atom] = len(atoms)
            atoms.append(atom)
            levels[t].append(index[atom])
        if t <= N - 1:
            assign_gsets(t)

    # designated families, block-indexed: block n feeds level n aliases
    # (m = 0) and level n+1 chain structure (m >= 1)
    families: dict[int, Family] = {}

    def add_family(prime_key, table, tag, vectors):
        if not vectors:
            return
        if prime_key not in table:
            raise ValueError(f"prime table does not cover index {tag}")
        prime = table[prime_key]
        families[prime] = Family(prime, tag, tuple(vectors))

    max_m = layout.z_max_len
    for n in range(N):
        level_n_atoms = [GroupElement.of({i: 1}) for i in levels[n]]
        add_family((n, 0, 0), primes.p, f"p({n},0,0)", level_n_atoms)
        if include_b:
            root_label = tree.labels[()]
            add_family((n, 0, root_label, 0), primes.q, f"q({n},0,{root_label},0)",
                       level_n_atoms)
        by_len: dict[int, list[Atom]] = {}
        for i in levels[n + 1]:
            atom = atoms[i]
            if atom.kind == "a":
                by_len.setdefault(len(atom.seq), []).append(atom)
        for m in range(1, max_m + 1):
            group_m = by_len.get(m, [])
            add_family(
                (n, m, 0), primes.p, f"p({n},{m},0)",
                [GroupElement.of({index[a]: 1}) for a in group_m],
            )
            pairs = []
            for a in group_m:
                parent = _sequence_parent(index, n + 1, a.alpha, a.seq, alias)
                pairs.append(GroupElement.of({index[a]: 1, parent: 1}))
            add_family((n, m, 1), primes.p, f"p({n},{m},1)", pairs)
        if include_b and n + 1 <= b_max_level:
            by_label: dict[tuple[int, int], list[GroupElement]] = {}
            for i in levels[n + 1]:
                atom = atoms[i]
                if atom.kind != "b":
                    continue
                eta = atom.seq
                m = len(eta)
                label = tree.labels[eta]
                if m == 1:
                    parent = alias[atom.alpha]
                else:
                    parent = index[Atom(n + 1, "b", atom.alpha, eta[:-1])]
                by_label.setdefault((m, label), []).append(
                    GroupElement.of({i: 1, parent: 1})
                )
            for (m, label), vectors in sorted(by_label.items()):
                add_family((n, m, label, 1), primes.q, f"q({n},{m},{label},1)", vectors)

    return TruncatedGroup(
        layout=layout,
        tree=tree,
        primes=primes,
        atoms=tuple(atoms),
        levels=tuple(tuple(l) for l in levels),
        gsets=tuple(gsets),
        families=families,
        include_b=include_b,
        b_max_level=b_max_level,
        subset=tuple(sorted(set(block1_subset))) if block1_subset is not None else None,
    )


def random_member(g: TruncatedGroup, rng, n_terms: int = 4, max_power: int = 2) -> GroupElement:
    """Random group member assembled from generators (always contained)."""
    x = GroupElement.zero()
    primes = sorted(g.families)
    for _ in range(n_terms):
        p = rng.choice(primes)
        fam = g.families[p]
        v = fam.vectors[rng.randrange(len(fam.vectors))]
        k = rng.randint(0, max_power)
        c = rng.randint(-3, 3)
        if c:
            x = x + v.scale(Fraction(c, p ** k))
    n_int = rng.randint(0, 2)
    for _ in range(n_int):
        idx = rng.randrange(g.n_atoms)
        c = rng.randint(-2, 2)
        if c:
            x = x + GroupElement.of({idx: c})
    return x
