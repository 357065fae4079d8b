"""Finite labeled rooted trees and their height-preserving embedding
quasi-order.

Trees are prefix-closed sets of integer sequences (the root is the empty
sequence); labels come from an explicit quasi-order table.  `embeds`
decides the relation via the child-cover recursion, which is valid
because the relation demands height preservation but not injectivity;
`find_embedding` produces a checked witness; `antichain_pairs` sweeps a
family.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Optional

from . import kernels

Node = tuple[int, ...]
Label = Hashable


@dataclass(frozen=True)
class QuasiOrderTable:
    """Explicit quasi-order: element set plus the full relation as pairs."""

    elements: tuple[Label, ...]
    pairs: frozenset[tuple[Label, Label]]

    def __post_init__(self):
        elems = set(self.elements)
        if len(self.elements) != len(elems):
            raise ValueError("duplicate elements in quasi-order")
        for a, b in self.pairs:
            if a not in elems or b not in elems:
                raise ValueError(f"relation pair ({a!r}, {b!r}) outside element set")
        for a in elems:
            if (a, a) not in self.pairs:
                raise ValueError(f"relation is not reflexive at {a!r}")
        for a, b in self.pairs:
            for c, d in self.pairs:
                if b == c and (a, d) not in self.pairs:
                    raise ValueError(f"relation is not transitive: {a!r} <= {b!r} <= {d!r}")

    def leq(self, a: Label, b: Label) -> bool:
        return (a, b) in self.pairs

    def __contains__(self, a: Label) -> bool:
        return a in self.elements

    @staticmethod
    def chain(labels: Iterable[Label]) -> "QuasiOrderTable":
        """Total order in the given sequence order."""
        labels = tuple(labels)
        pairs = frozenset(
            (labels[i], labels[j]) for i in range(len(labels)) for j in range(i, len(labels))
        )
        return QuasiOrderTable(labels, pairs)

    @staticmethod
    def equality(labels: Iterable[Label]) -> "QuasiOrderTable":
        """Discrete order: comparable only to itself.

        The instantiation used for natural-number tree labels, where the
        morphism conditions collapse to label equality.
        """
        labels = tuple(dict.fromkeys(labels))
        return QuasiOrderTable(labels, frozenset((x, x) for x in labels))


@dataclass(frozen=True)
class LabeledTree:
    """Prefix-closed set of integer sequences with one label per node."""

    labels: Mapping[Node, Label] = field(default_factory=dict)

    def __post_init__(self):
        nodes = set(self.labels)
        if () not in nodes:
            raise ValueError("tree must contain the empty sequence as root")
        for node in nodes:
            if node and node[:-1] not in nodes:
                raise ValueError(f"node {node} has no parent: tree is not prefix-closed")

    @property
    def nodes(self) -> list[Node]:
        return sorted(self.labels)

    def label(self, node: Node) -> Label:
        return self.labels[node]

    def children(self, node: Node) -> list[Node]:
        k = len(node)
        return sorted(n for n in self.labels if len(n) == k + 1 and n[:k] == node)

    def height(self) -> int:
        return max(len(n) for n in self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def relabel(self, mapping: Mapping[Label, Label]) -> "LabeledTree":
        return LabeledTree({n: mapping.get(l, l) for n, l in self.labels.items()})


@dataclass(frozen=True)
class TreeMorphism:
    """Witness for tree embedding: node map of source into target."""

    mapping: Mapping[Node, Node]

    def __getitem__(self, node: Node) -> Node:
        return self.mapping[node]

    def items(self):
        return self.mapping.items()


def _check_labels(t: LabeledTree, q: QuasiOrderTable) -> None:
    for node in t.labels:
        if t.labels[node] not in q:
            raise ValueError(f"label {t.labels[node]!r} at node {node} outside the quasi-order")


def _flatten(t: LabeledTree, label_index: dict) -> tuple[list[int], list[int], list[Node]]:
    """Nodes sorted parents-first; returns (parents, labels, node list)."""
    nodes = sorted(t.labels, key=lambda n: (len(n), n))
    pos = {n: i for i, n in enumerate(nodes)}
    parents = [pos[n[:-1]] if n else -1 for n in nodes]
    labels = [label_index[t.labels[n]] for n in nodes]
    return parents, labels, nodes


def _leq_matrix(q: QuasiOrderTable) -> tuple[dict, list[int]]:
    label_index = {l: i for i, l in enumerate(q.elements)}
    n = len(q.elements)
    flat = [0] * (n * n)
    for a, b in q.pairs:
        flat[label_index[a] * n + label_index[b]] = 1
    return label_index, flat


def embeds(t1: LabeledTree, t2: LabeledTree, q: QuasiOrderTable) -> bool:
    """Decide the height-preserving label-nondecreasing embedding relation."""
    _check_labels(t1, q)
    _check_labels(t2, q)
    label_index, flat = _leq_matrix(q)
    p1, l1, _ = _flatten(t1, label_index)
    p2, l2, _ = _flatten(t2, label_index)
    return bool(kernels.tree_embed_dp(p1, l1, p2, l2, flat, len(q.elements)))


def embeds_bruteforce(t1: LabeledTree, t2: LabeledTree, q: QuasiOrderTable) -> bool:
    """Reference decision by exhaustive search over whole node maps.

    Kept deliberately separate from `embeds`; the two are compared
    against each other in the acceptance suite.
    """
    _check_labels(t1, q)
    _check_labels(t2, q)
    label_index, flat = _leq_matrix(q)
    p1, l1, _ = _flatten(t1, label_index)
    p2, l2, _ = _flatten(t2, label_index)
    return bool(kernels.tree_embed_search(p1, l1, p2, l2, flat, len(q.elements)))


def check_morphism(
    t1: LabeledTree,
    t2: LabeledTree,
    q: Optional[QuasiOrderTable],
    morphism: TreeMorphism,
    require_label_equality: bool = False,
) -> bool:
    """Validate a node map: total, height- and order-preserving, labels
    nondecreasing (or equal).  Independent of the search that built it."""
    mapping = morphism.mapping
    if set(mapping) != set(t1.labels):
        return False
    for node, image in mapping.items():
        if image not in t2.labels:
            return False
        if len(image) != len(node):
            return False
        if node and mapping[node[:-1]] != image[: len(image) - 1]:
            return False
        if require_label_equality:
            if t1.labels[node] != t2.labels[image]:
                return False
        else:
            if q is None or not q.leq(t1.labels[node], t2.labels[image]):
                return False
    for a in mapping:
        for b in mapping:
            if len(a) <= len(b) and b[: len(a)] == a:
                if mapping[b][: len(mapping[a])] != mapping[a]:
                    return False
    return True


def find_embedding(
    t1: LabeledTree, t2: LabeledTree, q: QuasiOrderTable
) -> Optional[TreeMorphism]:
    """Embedding witness, or None.  Ties break to the smallest target
    child, so witnesses are deterministic."""
    _check_labels(t1, q)
    _check_labels(t2, q)
    memo: dict[tuple[Node, Node], bool] = {}

    def emb(u: Node, v: Node) -> bool:
        key = (u, v)
        got = memo.get(key)
        if got is not None:
            return got
        ok = q.leq(t1.labels[u], t2.labels[v])
        if ok:
            for c in t1.children(u):
                if not any(emb(c, d) for d in t2.children(v)):
                    ok = False
                    break
        memo[key] = ok
        return ok

    if not emb((), ()):
        return None
    mapping: dict[Node, Node] = {(): ()}
    stack = [()]
    while stack:
        u = stack.pop()
        v = mapping[u]
        for c in t1.children(u):
            for d in t2.children(v):
                if emb(c, d):
                    mapping[c] = d
                    break
            stack.append(c)
    witness = TreeMorphism(mapping)
    if not check_morphism(t1, t2, q, witness):
        raise AssertionError("internal error: constructed witness failed validation")
    return witness


def antichain_pairs(
    family: list[LabeledTree], q: QuasiOrderTable
) -> list[tuple[int, int]]:
    """Ordered index pairs (i, j), i != j, with family[i] embedding into
    family[j].  Empty exactly when the family is an antichain."""
    if not family:
        raise ValueError("family must be nonempty")
    out = []
    for i, a in enumerate(family):
        for j, b in enumerate(family):
            if i != j and embeds(a, b, q):
                out.append((i, j))
    return out


def omega_labels(*trees: LabeledTree) -> QuasiOrderTable:
    """Equality table over the natural-number labels occurring in trees."""
    seen: set[Label] = set()
    for t in trees:
        seen.update(t.labels.values())
    return QuasiOrderTable.equality(sorted(seen))
