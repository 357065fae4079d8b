"""One versioned textual document format for every artifact.

Documents are canonical JSON (sorted keys, fixed indentation, trailing
newline) under a `rigidlab-doc` header, so identical content is
byte-identical on disk.  Exact rationals are always "num/den" strings;
no floating point appears anywhere.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any

from .groups import GroupElement, PrimeTable, TruncatedGroup, build_group
from .ordinals import BlockLayout
from .trees import LabeledTree, QuasiOrderTable
from .partition import ColoringTable

FORMAT = "rigidlab-doc"
VERSION = 1


class DocumentError(ValueError):
    pass


def fraction_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def parse_fraction(s: str) -> Fraction:
    num, _, den = s.partition("/")
    if not den:
        raise DocumentError(f"rational {s!r} is not in num/den form")
    return Fraction(int(num), int(den))


def dumps(kind: str, body: Any) -> str:
    doc = {"format": FORMAT, "version": VERSION, "kind": kind, "body": body}
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def loads(text: str, expect_kind: str | None = None) -> Any:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"not a JSON document: {e}") from None
    for field in ("format", "version", "kind", "body"):
        if field not in doc:
            raise DocumentError(f"document header is missing {field!r}")
    if doc["format"] != FORMAT:
        raise DocumentError(f"unknown document format {doc['format']!r}")
    if doc["version"] != VERSION:
        raise DocumentError(f"unsupported document version {doc['version']!r}")
    if expect_kind is not None and doc["kind"] != expect_kind:
        raise DocumentError(f"expected a {expect_kind} document, got {doc['kind']!r}")
    return doc["body"]


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


# -- quasi-orders -------------------------------------------------------


def quasi_order_doc(q: QuasiOrderTable) -> str:
    body = {
        "elements": sorted(q.elements, key=lambda x: (str(type(x)), str(x))),
        "pairs": sorted([list(p) for p in q.pairs], key=lambda p: [str(x) for x in p]),
    }
    return dumps("quasi_order", body)


def quasi_order_from_doc(text: str) -> QuasiOrderTable:
    body = loads(text, "quasi_order")
    try:
        return QuasiOrderTable(
            tuple(body["elements"]),
            frozenset(tuple(p) for p in body["pairs"]),
        )
    except (KeyError, TypeError) as e:
        raise DocumentError(f"malformed quasi_order body: missing {e}") from None


# -- labeled trees ------------------------------------------------------


def tree_doc(t: LabeledTree) -> str:
    body = {
        "nodes": [
            {"path": list(node), "label": t.labels[node]} for node in sorted(t.labels)
        ]
    }
    return dumps("labeled_tree", body)


def tree_from_doc(text: str) -> LabeledTree:
    body = loads(text, "labeled_tree")
    try:
        labels = {tuple(n["path"]): n["label"] for n in body["nodes"]}
    except (KeyError, TypeError) as e:
        raise DocumentError(f"malformed labeled_tree body: missing {e}") from None
    return LabeledTree(labels)


# -- colorings ----------------------------------------------------------


def coloring_doc(f: ColoringTable) -> str:
    body = {
        "ground_size": f.ground_size,
        "subset_cap": f.subset_cap,
        "entries": sorted(
            [[sorted(s), c] for s, c in f.color.items()],
            key=lambda e: (len(e[0]), e[0]),
        ),
    }
    return dumps("coloring", body)


def coloring_from_doc(text: str) -> ColoringTable:
    body = loads(text, "coloring")
    try:
        table = {frozenset(s): c for s, c in body["entries"]}
        return ColoringTable(body["ground_size"], body["subset_cap"], table)
    except (KeyError, TypeError) as e:
        raise DocumentError(f"malformed coloring body: missing {e}") from None


# -- groups -------------------------------------------------------------


def group_doc(g: TruncatedGroup) -> str:
    body = {
        "layout": g.layout.to_doc(),
        "tree": {"nodes": [{"path": list(n), "label": g.tree.labels[n]} for n in sorted(g.tree.labels)]},
        "primes": g.primes.to_doc(),
        "include_b": g.include_b,
        "b_max_level": g.b_max_level,
        "block1_subset": list(g.subset) if g.subset is not None else None,
        "atoms": [a.name() for a in g.atoms],
        "families": [
            {
                "prime": fam.prime,
                "tag": fam.tag,
                "vectors": [[[i, int(c)] for i, c in v.coeffs] for v in fam.vectors],
            }
            for _, fam in sorted(g.families.items())
        ],
    }
    return dumps("group", body)


def group_from_doc(text: str) -> TruncatedGroup:
    body = loads(text, "group")
    try:
        layout = BlockLayout.from_doc(body["layout"])
        tree = LabeledTree({tuple(n["path"]): n["label"] for n in body["tree"]["nodes"]})
        primes = PrimeTable.from_doc(body["primes"])
        subset = body.get("block1_subset")
        g = build_group(
            layout,
            tree,
            primes,
            include_b=body["include_b"],
            b_max_level=body["b_max_level"],
            block1_subset=tuple(subset) if subset is not None else None,
        )
    except (KeyError, TypeError) as e:
        raise DocumentError(f"malformed group body: missing {e}") from None
    if [a.name() for a in g.atoms] != body["atoms"]:
        raise DocumentError("group document atom list does not match its build recipe")
    return g


def element_doc(x: GroupElement) -> str:
    body = {"coeffs": [[i, fraction_str(c)] for i, c in x.coeffs]}
    return dumps("group_element", body)


def element_from_doc(text: str) -> GroupElement:
    body = loads(text, "group_element")
    try:
        return GroupElement.of([(i, parse_fraction(s)) for i, s in body["coeffs"]])
    except (KeyError, TypeError) as e:
        raise DocumentError(f"malformed group_element body: missing {e}") from None


def report_doc(body: dict) -> str:
    return dumps("report", body)
