"""Divisibility-transport homomorphism spaces and what hangs off them:
scalar automorphism classification, tree-morphism extraction, relation
lattices of tuples (quantifier-free types), type trees, and the
distinct-subset group family with its distinguishing indices.

A transport map sends each prime's designated vectors into the rational
span of the other group's same-prime designated vectors; the space of
all such linear maps is cut out by exact integer constraints, so a
kernel computation returns its full basis.  Singleton families restrict
the support of each column directly; pair families contribute genuine
equations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Optional, Sequence

from . import kernels
from .groups import (
    Atom,
    Family,
    GroupElement,
    PrimeTable,
    TruncatedGroup,
    build_group,
    contains,
)
from .ordinals import BlockLayout, Ordinal, is_safe
from .trees import LabeledTree, Node, TreeMorphism, check_morphism


class ExtractionStall(ValueError):
    """Raised when the level-by-level extraction finds no qualifying child.

    Only possible at truncation artifacts; reported, never patched over.
    """


@dataclass(frozen=True)
class HomElement:
    """Linear map between two truncated groups, one image per source atom."""

    images: tuple[GroupElement, ...]

    def image(self, src_idx: int) -> GroupElement:
        return self.images[src_idx]

    def apply(self, x: GroupElement) -> GroupElement:
        out = GroupElement.zero()
        for j, c in x.coeffs:
            out = out + self.images[j].scale(c)
        return out

    def is_zero(self) -> bool:
        return all(img.is_zero() for img in self.images)

    def scale(self, s) -> "HomElement":
        return HomElement(tuple(img.scale(s) for img in self.images))

    def __add__(self, other: "HomElement") -> "HomElement":
        return HomElement(tuple(a + b for a, b in zip(self.images, other.images)))


@dataclass(frozen=True)
class HomSpace:
    source: TruncatedGroup
    target: TruncatedGroup
    variables: tuple[tuple[int, int], ...]
    basis: tuple[HomElement, ...]
    constraint_rank: int

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _allowed_supports(a: TruncatedGroup, b: TruncatedGroup) -> list[Optional[set[int]]]:
    allowed: list[Optional[set[int]]] = [None] * a.n_atoms
    for p, fam_a in a.families.items():
        if not fam_a.singleton:
            continue
        fam_b = b.families.get(p)
        tgt = fam_b.atom_indices() if fam_b is not None else set()
        for v in fam_a.vectors:
            j = v.coeffs[0][0]
            allowed[j] = set(tgt) if allowed[j] is None else (allowed[j] & tgt)
    return allowed


def hom_space(a: TruncatedGroup, b: TruncatedGroup) -> HomSpace:
    """Exact basis of the divisibility-transport map space.

    Dimension 0 means no nonzero transport map exists at this
    truncation.  Basis vectors are integer matrices in canonical
    echelon order, so results are deterministic.
    """
    if a.primes != b.primes:
        raise ValueError("groups were not built from the same prime table")
    allowed = _allowed_supports(a, b)
    full = set(range(b.n_atoms))
    supports = [sorted(s) if s is not None else sorted(full) for s in allowed]
    variables = [(j, i) for j in range(a.n_atoms) for i in supports[j]]
    var_index = {v: k for k, v in enumerate(variables)}
    nvars = len(variables)

    row_lattice = kernels.IntLattice(nvars)
    for p in sorted(a.families):
        fam_a = a.families[p]
        if fam_a.singleton:
            continue
        funcs = kernels.right_kernel_lattice(b.family_rows(p), b.n_atoms)
        for v in fam_a.vectors:
            for c in funcs:
                row = [0] * nvars
                nonzero = False
                for j, vj in v.coeffs:
                    for i in supports[j]:
                        ci = c[i]
                        if ci:
                            row[var_index[(j, i)]] += int(vj) * ci
                            nonzero = True
                if nonzero:
                    row_lattice.add(row)

    constraints = row_lattice.basis()
    kernel = kernels.right_kernel_lattice(constraints, nvars)
    basis = []
    for vec in kernel:
        images = [dict() for _ in range(a.n_atoms)]
        for k, val in enumerate(vec):
            if val:
                j, i = variables[k]
                images[j][i] = Fraction(val)
        basis.append(HomElement(tuple(GroupElement.of(img) for img in images)))
    return HomSpace(a, b, tuple(variables), tuple(basis), len(constraints))


def _in_rational_span(vec: list[Fraction], rows: list[list[int]]) -> bool:
    """Fraction-based elimination, independent of the integer kernels."""
    if not any(vec):
        return True
    work = [[Fraction(x) for x in row] for row in rows]
    target = list(vec)
    ncols = len(target)
    pivot_rows: list[tuple[int, list[Fraction]]] = []
    for row in work:
        for pc, prow in pivot_rows:
            if row[pc]:
                f = row[pc] / prow[pc]
                for k in range(ncols):
                    row[k] -= f * prow[k]
        lead = next((k for k, x in enumerate(row) if x), None)
        if lead is not None:
            pivot_rows.append((lead, row))
    for pc, prow in pivot_rows:
        if target[pc]:
            f = target[pc] / prow[pc]
            for k in range(ncols):
                target[k] -= f * prow[k]
    return not any(target)


def satisfies_transport(a: TruncatedGroup, b: TruncatedGroup, h: HomElement) -> bool:
    """Independent check that a map transports every designated family."""
    for p, fam_a in sorted(a.families.items()):
        rows = b.family_rows(p)
        for v in fam_a.vectors:
            fv = b.dense(h.apply(v))
            if not _in_rational_span(fv, rows):
                return False
    return True


def identity_map(g: TruncatedGroup) -> HomElement:
    return HomElement(tuple(GroupElement.of({i: 1}) for i in range(g.n_atoms)))


def random_transport_search(
    a: TruncatedGroup, b: TruncatedGroup, trials: int, seed: int
) -> Optional[HomElement]:
    """Random small-denominator candidate maps checked independently.

    Used as the second route when a solver reports dimension 0: finding
    any nonzero transport map here would refute that verdict.
    """
    import random

    rng = random.Random(seed)
    allowed = _allowed_supports(a, b)
    supports = [sorted(s) if s is not None else list(range(b.n_atoms)) for s in allowed]
    dens = (1, 1, 2, 3)
    for _ in range(trials):
        images = []
        nonzero = False
        for j in range(a.n_atoms):
            img: dict[int, Fraction] = {}
            for i in supports[j]:
                if rng.random() < 0.3:
                    num = rng.randint(-2, 2)
                    if num:
                        img[i] = Fraction(num, rng.choice(dens))
            if img:
                nonzero = True
            images.append(GroupElement.of(img))
        if not nonzero:
            continue
        h = HomElement(tuple(images))
        if satisfies_transport(a, b, h):
            return h
    return None


def scalar_unit_primes(g: TruncatedGroup) -> list[int]:
    """Primes l with (1/l) times every designated vector still a member.

    Such a prime would make multiplication by l a unit on the group;
    faithful builds have none.
    """
    out = []
    for l in g.primes.all_primes():
        vectors = [v for fam in g.families.values() for v in fam.vectors]
        if vectors and all(contains(g, v.scale(Fraction(1, l))) for v in vectors):
            out.append(l)
    return out


def classify_automorphisms(g: TruncatedGroup, space: Optional[HomSpace] = None) -> frozenset:
    """Scalars c acting invertibly on the group with c*id a transport map.

    Returns {+1, -1} on faithful builds; raises when the truncation
    degenerates so far that some prime acts as a unit.
    """
    if space is None:
        space = hom_space(g, g)
    ident = identity_map(g)
    if not satisfies_transport(g, g, ident):
        raise AssertionError("identity map fails its own transport constraints")
    units = scalar_unit_primes(g)
    if units:
        raise ValueError(
            f"primes {units} act as units on this build; scalar group is infinite"
        )
    return frozenset({1, -1})


# -- tree-morphism extraction ------------------------------------------


def _b_atom_index(g: TruncatedGroup, level: int, alpha: Ordinal, eta: Node) -> Optional[int]:
    atom = Atom(level, "b", alpha, tuple(eta))
    return g.atom_index(atom) if g.has_atom(atom) else None


def _chain_walk(
    h: HomElement, a: TruncatedGroup, b: TruncatedGroup, n: int, alpha: Ordinal,
    tree_nodes: list[Node],
) -> TreeMorphism:
    chain_level = n + 1
    mapping: dict[Node, Node] = {(): ()}
    for zeta in tree_nodes:
        eta = zeta[:-1]
        theta_eta = mapping[eta]
        src_idx = _b_atom_index(a, chain_level, alpha, zeta)
        if src_idx is None:
            raise ExtractionStall(f"source chain atom missing for node {zeta}")
        img = h.image(src_idx)
        label = a.tree.labels[zeta]
        candidates = []
        for child in b.tree.children(theta_eta):
            if b.tree.labels[child] != label:
                continue
            tgt_idx = _b_atom_index(b, chain_level, alpha, child)
            if tgt_idx is not None and img.get(tgt_idx):
                candidates.append(child)
        if not candidates:
            raise ExtractionStall(f"no qualifying child for node {zeta}")
        mapping[zeta] = min(candidates)
    return TreeMorphism(mapping)


def extract_tree_map(
    h: HomElement, a: TruncatedGroup, b: TruncatedGroup
) -> TreeMorphism:
    """Level-by-level extraction of a tree morphism from a transport map.

    A start is an aliased atom mapping with a nonzero coefficient on the
    same ordinal's alias in the target; from a start, every node of the
    next height must map to a label-equal child of its parent's image
    whose chain atom carries a nonzero coefficient.  All starts are
    tried in canonical order; a map with starts but no completed walk is
    a truncation artifact and is reported as a stall naming the first
    blocked node, never patched.
    """
    if h.is_zero():
        raise ValueError("cannot extract from the zero map")
    if a.tree.labels[()] != b.tree.labels[()]:
        raise ExtractionStall("root labels differ; no morphism can start")

    tree_nodes = [n for n in sorted(a.tree.labels, key=lambda x: (len(x), x)) if n]
    need_chains = bool(tree_nodes)

    starts: list[tuple[int, Ordinal]] = []
    blocks = min(len(a.gsets), len(b.gsets))
    for n in range(blocks):
        chain_level = n + 1
        if need_chains:
            if not (a.include_b and chain_level <= a.b_max_level):
                continue
            if not (b.include_b and chain_level <= b.b_max_level):
                continue
        for idx in a.levels[n]:
            for alpha in a.gsets[n].get(idx, ()):
                tgt = b.alias(alpha)
                if tgt is None:
                    continue
                if h.image(idx).get(tgt):
                    starts.append((n, alpha))
    if not starts:
        raise ValueError(
            "no aliased atom maps with a nonzero coefficient on the shared alias"
        )
    first_stall: Optional[ExtractionStall] = None
    for n, alpha in starts:
        try:
            witness = _chain_walk(h, a, b, n, alpha, tree_nodes)
        except ExtractionStall as e:
            if first_stall is None:
                first_stall = e
            continue
        if not check_morphism(a.tree, b.tree, None, witness, require_label_equality=True):
            raise ExtractionStall("extracted map failed the morphism checker")
        return witness
    raise first_stall if first_stall is not None else ExtractionStall("no start completed")


# -- quantifier-free types ---------------------------------------------


@dataclass(frozen=True)
class QfType:
    """Canonical integer relation lattice of a tuple in an abelian group."""

    arity: int
    basis: tuple[tuple[int, ...], ...]

    def id_string(self) -> str:
        rows = ";".join(",".join(str(x) for x in row) for row in self.basis)
        return f"qt{self.arity}[{rows}]"


def qf_type(orders: Sequence[int], elems: Sequence[tuple[int, ...]]) -> QfType:
    """Relation lattice {c : sum c_i s_i = 0} of a tuple, canonical HNF.

    Orders list the cyclic components; 0 means an infinite cyclic
    component.  Elements are coordinate tuples.
    """
    n = len(elems)
    d = len(orders)
    for s in elems:
        if len(s) != d:
            raise ValueError("element arity does not match the presentation")
    slots = [j for j in range(d) if orders[j] != 0]
    slack_of = {j: n + k for k, j in enumerate(slots)}
    ncols = n + len(slots)
    rows = []
    for j in range(d):
        row = [0] * ncols
        for i in range(n):
            row[i] = elems[i][j]
        if orders[j] != 0:
            row[slack_of[j]] = orders[j]
        rows.append(row)
    kernel = kernels.right_kernel_lattice(rows, ncols)
    projected = kernels.IntLattice(n)
    for vec in kernel:
        projected.add(vec[:n])
    return QfType(n, tuple(tuple(row) for row in projected.basis()))


def group_elements(orders: Sequence[int]) -> list[tuple[int, ...]]:
    """All elements of the finite group with the given cyclic orders."""
    for m in orders:
        if m < 1:
            raise ValueError("finite enumeration needs positive orders")
    return [tuple(reversed(t)) for t in product(*(range(m) for m in reversed(orders)))]


def qf_type_tree(orders: Sequence[int], depth: int) -> LabeledTree:
    """Tree of injective element-index sequences labeled by their types.

    Labels are canonical id strings, so trees of different groups share
    a label vocabulary and compare under the equality order.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    elems = group_elements(orders)
    labels: dict[Node, str] = {}

    def rec(prefix: tuple[int, ...]) -> None:
        tup = [elems[i] for i in prefix]
        labels[prefix] = qf_type(orders, tup).id_string()
        if len(prefix) >= depth:
            return
        for i in range(len(elems)):
            if i not in prefix:
                rec(prefix + (i,))

    rec(())
    return LabeledTree(labels)


def embedding_to_type_chain(
    orders_a: Sequence[int],
    orders_b: Sequence[int],
    f: Mapping[tuple, tuple],
) -> dict[Node, Node]:
    """Chain-shaped type-tree morphism induced by an injective hom.

    Maps each prefix of the canonical source enumeration to the index
    sequence of its image; the inverse construction of
    hom_from_tree_embedding, used to seed round-trip checks.
    """
    elems_a = group_elements(orders_a)
    index_b = {e: i for i, e in enumerate(group_elements(orders_b))}
    chain: dict[Node, Node] = {(): ()}
    for t in range(1, len(elems_a) + 1):
        prefix = tuple(range(t))
        chain[prefix] = tuple(index_b[f[elems_a[i]]] for i in prefix)
    return chain


def hom_from_tree_embedding(
    theta: Mapping[Node, Node] | TreeMorphism,
    orders_a: Sequence[int],
    orders_b: Sequence[int],
) -> dict[tuple[int, ...], tuple[int, ...]]:
    """Injective homomorphism read off a type-tree morphism.

    Follows the chain of prefixes of the canonical enumeration of the
    source group: the image of the n-th element is the n-th entry of
    the image of the length-(n+1) prefix.  Additivity and injectivity
    are verified exhaustively before returning.
    """
    mapping = theta.mapping if isinstance(theta, TreeMorphism) else theta
    elems_a = group_elements(orders_a)
    elems_b = group_elements(orders_b)
    n = len(elems_a)
    f: dict[tuple[int, ...], tuple[int, ...]] = {}
    for t in range(1, n + 1):
        prefix = tuple(range(t))
        image = mapping.get(prefix)
        if image is None:
            raise ValueError(f"morphism not defined on the length-{t} enumeration prefix")
        if len(image) != t:
            raise ValueError("image node has the wrong height")
        f[elems_a[t - 1]] = elems_b[image[t - 1]]

    def add(orders, x, y):
        return tuple((a + b) % m if m else a + b for a, b, m in zip(x, y, orders))

    for x in elems_a:
        for y in elems_a:
            if f[add(orders_a, x, y)] != add(orders_b, f[x], f[y]):
                raise ValueError("extracted map is not additive")
    if len(set(f.values())) != n:
        raise ValueError("extracted map is not injective")
    return f


# -- distinct-subset family --------------------------------------------


def build_h_family(
    layout: BlockLayout,
    subsets: Sequence[Sequence[int]],
    primes: Optional[PrimeTable] = None,
) -> list[TruncatedGroup]:
    """Sequence-atom-only groups whose block-1 indexing is confined to a
    chosen offset subset per group; the shifted subset becomes the whole
    of that group's Y_1."""
    if layout.block_count < 2:
        raise ValueError("the subset family needs at least two blocks")
    normalized = [tuple(sorted(set(s))) for s in subsets]
    if len(set(normalized)) != len(normalized):
        raise ValueError("subsets must be pairwise distinct")
    for s in normalized:
        if not s:
            raise ValueError("subsets must be nonempty")
        if not any(is_safe(Ordinal(1, gamma), layout) for gamma in s):
            raise ValueError(f"subset {list(s)} misses the safe region entirely")
    tree = LabeledTree({(): 0})
    if primes is None:
        primes = PrimeTable.assign(layout.block_count, layout.z_max_len, 0, 0)
    return [
        build_group(layout, tree, primes, include_b=False, block1_subset=s)
        for s in normalized
    ]


def distinguishing_sentence(
    i: int, j: int, family: Sequence[TruncatedGroup]
) -> tuple[Ordinal, bool, bool]:
    """A safe block-1 ordinal on which the selector sentence separates
    the i-th and j-th groups, with the two truth values."""
    from .formulas import psi_satisfiable

    if i == j:
        raise ValueError("the two indices must differ")
    gi, gj = family[i], family[j]
    if gi.subset is None or gj.subset is None:
        raise ValueError("groups do not carry subset restrictions")
    layout = gi.layout

    def first_safe(diff):
        for gamma in sorted(diff):
            if is_safe(Ordinal(1, gamma), layout):
                return Ordinal(1, gamma)
        return None

    alpha = first_safe(set(gi.subset) - set(gj.subset))
    if alpha is None:
        alpha = first_safe(set(gj.subset) - set(gi.subset))
    if alpha is None:
        raise ValueError("no safe offset separates the two subsets")
    return alpha, psi_satisfiable(gi, 1, alpha), psi_satisfiable(gj, 1, alpha)
