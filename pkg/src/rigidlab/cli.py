"""Batch command surface.

Every subcommand reads documents, runs one query, and emits a
deterministic report: human-readable summary lines, a separator, then
the machine-readable report document embedding the sha256 digest of
every input file and the truncation parameters used.  Decided queries
exit 0 whatever the verdict; only input and contract errors are
nonzero.
"""

from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import click

from . import backforth, formulas, homs, partition, serialize, trees
from .groups import CapacityError, PrimeTable, build_group
from .ordinals import Ordinal, build_layout


def _read(path: str, digests: dict) -> str:
    text = Path(path).read_text()
    digests[path] = serialize.digest(text)
    return text


def _parse_params(spec: str):
    try:
        L, D, N, zlen = (int(x) for x in spec.split(","))
    except ValueError:
        raise click.ClickException(
            f"--params must be L,D,N,zlen (got {spec!r})"
        ) from None
    return L, D, N, zlen


def _parse_ordinal(spec: str) -> Ordinal:
    try:
        block, offset = (int(x) for x in spec.split(","))
    except ValueError:
        raise click.ClickException(
            f"ordinals are written block,offset (got {spec!r})"
        ) from None
    return Ordinal(block, offset)


def _parse_orders(spec: str) -> list[int]:
    if not spec:
        return []
    try:
        return [int(x) for x in spec.split(",")]
    except ValueError:
        raise click.ClickException(f"orders must be comma-separated (got {spec!r})") from None


def _emit(command: str, digests: dict, params: dict, result: dict, summary: list[str]):
    for line in summary:
        click.echo(line)
    click.echo("---")
    body = {
        "command": command,
        "inputs": dict(sorted(digests.items())),
        "params": params,
        "result": result,
    }
    click.echo(serialize.report_doc(body), nl=False)


def _wrap(fn):
    def runner(*args, **kwargs):
        try:
            fn(*args, **kwargs)
        except (ValueError, serialize.DocumentError, CapacityError, OSError) as e:
            raise click.ClickException(str(e)) from None

    runner.__name__ = fn.__name__
    runner.__doc__ = fn.__doc__
    return runner


@click.group()
def main():
    """Labeled-tree quasi-orders, truncated divisibility groups, and
    their rigidity computations."""


@main.group()
def tree():
    """Labeled-tree embedding queries."""


@tree.command("embed")
@click.argument("t1_path")
@click.argument("t2_path")
@click.argument("q_path")
@click.option("--witness", is_flag=True, help="Include the morphism when it exists.")
@_wrap
def tree_embed(t1_path, t2_path, q_path, witness):
    """Decide whether the first tree embeds into the second."""
    digests: dict = {}
    t1 = serialize.tree_from_doc(_read(t1_path, digests))
    t2 = serialize.tree_from_doc(_read(t2_path, digests))
    q = serialize.quasi_order_from_doc(_read(q_path, digests))
    verdict = trees.embeds(t1, t2, q)
    result: dict = {"embeds": verdict}
    summary = [f"embeds: {str(verdict).lower()}"]
    if witness and verdict:
        morphism = trees.find_embedding(t1, t2, q)
        result["witness"] = sorted(
            [[list(k), list(v)] for k, v in morphism.items()]
        )
        summary.append(f"witness nodes: {len(morphism.mapping)}")
    _emit("tree embed", digests, {}, result, summary)


@tree.command("antichain")
@click.argument("q_path")
@click.argument("tree_paths", nargs=-1, required=True)
@_wrap
def tree_antichain(q_path, tree_paths):
    """List ordered pairs (i, j) with tree i embedding into tree j."""
    digests: dict = {}
    q = serialize.quasi_order_from_doc(_read(q_path, digests))
    family = [serialize.tree_from_doc(_read(p, digests)) for p in tree_paths]
    pairs = trees.antichain_pairs(family, q)
    result = {"pairs": [list(p) for p in pairs], "antichain": not pairs}
    summary = [
        f"related pairs: {len(pairs)}",
        f"antichain: {str(not pairs).lower()}",
    ]
    _emit("tree antichain", digests, {"family_size": len(family)}, result, summary)


@main.group("partition")
def partition_group():
    """Shift-invariant sequence search over subset colorings."""


@partition_group.command("search")
@click.argument("coloring_path", required=False)
@click.option("--len", "target_len", type=int, required=True)
@click.option("--random", "random_spec", default=None,
              help="Generate the table: ground,cap,colors (needs --seed).")
@click.option("--seed", type=int, default=0, show_default=True)
@_wrap
def partition_search(coloring_path, target_len, random_spec, seed):
    """Search for an injective sequence with shift-invariant colors."""
    digests: dict = {}
    params: dict = {"target_len": target_len}
    if random_spec is not None:
        try:
            ground, cap, colors = (int(x) for x in random_spec.split(","))
        except ValueError:
            raise click.ClickException("--random must be ground,cap,colors") from None
        f = partition.ColoringTable.random_table(ground, cap, colors, seed)
        params.update({"random": [ground, cap, colors], "seed": seed})
    elif coloring_path is not None:
        f = serialize.coloring_from_doc(_read(coloring_path, digests))
    else:
        raise click.ClickException("give a coloring document or --random")
    found = partition.search_shift_invariant(f, target_len)
    result = {"sequence": list(found) if found is not None else None}
    summary = [f"sequence: {' '.join(map(str, found)) if found is not None else 'none'}"]
    _emit("partition search", digests, params, result, summary)


def _layout_options(fn):
    fn = click.option("--entry-cap", type=int, default=6, show_default=True,
                      help="Sample cap for decreasing-sequence entries.")(fn)
    fn = click.option("--params", required=True, help="L,D,N,zlen truncation sizes.")(fn)
    return fn


@main.group("group")
def group_group():
    """Build truncated groups and query membership and divisibility."""


@group_group.command("build")
@click.argument("tree_path")
@click.option("-o", "--output", required=True, help="Where to write the group document.")
@_layout_options
@click.option("--b-levels", type=int, default=None,
              help="Highest level carrying tree atoms (default: all).")
@click.option("--max-height", type=int, default=None,
              help="Prime-table bound on tree height (for cross-build compatibility).")
@click.option("--max-label", type=int, default=None,
              help="Prime-table bound on labels (for cross-build compatibility).")
@_wrap
def group_build(tree_path, output, params, entry_cap, b_levels, max_height, max_label):
    """Assemble the group over a labeled tree and write its document."""
    digests: dict = {}
    t = serialize.tree_from_doc(_read(tree_path, digests))
    L, D, N, zlen = _parse_params(params)
    layout = build_layout(L, D, N, zlen, entry_cap=entry_cap)
    primes = None
    if max_height is not None or max_label is not None:
        height = max_height if max_height is not None else t.height()
        label = max_label if max_label is not None else max(t.labels.values())
        primes = PrimeTable.assign(N, zlen, height, label)
    g = build_group(layout, t, primes, b_max_level=b_levels)
    doc = serialize.group_doc(g)
    Path(output).write_text(doc)
    result = {
        "atoms": g.n_atoms,
        "levels": [len(l) for l in g.levels],
        "families": len(g.families),
        "output_digest": serialize.digest(doc),
    }
    summary = [
        f"atoms: {g.n_atoms}",
        f"families: {len(g.families)}",
        f"written: {output}",
    ]
    _emit("group build", digests, {"params": params, "entry_cap": entry_cap}, result, summary)


@group_group.command("member")
@click.argument("group_path")
@click.argument("element_path")
@_wrap
def group_member(group_path, element_path):
    """Decide membership of an element in the generated subgroup."""
    from .groups import contains

    digests: dict = {}
    g = serialize.group_from_doc(_read(group_path, digests))
    x = serialize.element_from_doc(_read(element_path, digests))
    verdict = contains(g, x)
    _emit("group member", digests, {}, {"member": verdict},
          [f"member: {str(verdict).lower()}"])


@group_group.command("divides")
@click.argument("group_path")
@click.argument("element_path")
@click.option("--p", "prime", type=int, required=True)
@_wrap
def group_divides(group_path, element_path, prime):
    """Decide divisibility by every power of a prime."""
    from .groups import divides_pinf

    digests: dict = {}
    g = serialize.group_from_doc(_read(group_path, digests))
    x = serialize.element_from_doc(_read(element_path, digests))
    verdict = divides_pinf(g, prime, x)
    _emit("group divides", digests, {"p": prime}, {"divides": verdict},
          [f"divides: {str(verdict).lower()}"])


@main.group("formula")
def formula_group():
    """Evaluate the recursive divisibility formulas."""


@formula_group.command("phi")
@click.argument("group_path")
@click.argument("element_path")
@click.option("--n", type=int, required=True)
@click.option("--m", type=int, required=True)
@click.option("--beta", required=True, help="Threshold ordinal block,offset.")
@_wrap
def formula_phi(group_path, element_path, n, m, beta):
    """Threshold formula evaluation."""
    digests: dict = {}
    g = serialize.group_from_doc(_read(group_path, digests))
    x = serialize.element_from_doc(_read(element_path, digests))
    b = _parse_ordinal(beta)
    verdict = formulas.eval_phi(g, n, m, b, x)
    _emit("formula phi", digests, {"n": n, "m": m, "beta": beta},
          {"holds": verdict}, [f"phi holds: {str(verdict).lower()}"])


@formula_group.command("psi")
@click.argument("group_path")
@click.argument("element_path")
@click.option("--n", type=int, required=True)
@click.option("--alpha", required=True, help="Index ordinal block,offset.")
@click.option("--unfold", is_flag=True,
              help="Evaluate the quantified definition instead of the characterization.")
@_wrap
def formula_psi(group_path, element_path, n, alpha, unfold):
    """Selector formula evaluation."""
    digests: dict = {}
    g = serialize.group_from_doc(_read(group_path, digests))
    x = serialize.element_from_doc(_read(element_path, digests))
    a = _parse_ordinal(alpha)
    verdict = (formulas.unfold_psi if unfold else formulas.eval_psi)(g, n, a, x)
    _emit("formula psi", digests, {"n": n, "alpha": alpha, "unfold": unfold},
          {"holds": verdict}, [f"psi holds: {str(verdict).lower()}"])


@formula_group.command("plength")
@click.argument("orders")
@click.option("--p", "prime", type=int, required=True)
@_wrap
def formula_plength(orders, prime):
    """Length of the p-group with the given cyclic orders."""
    parsed = _parse_orders(orders)
    length = formulas.p_length(parsed, prime)
    _emit("formula plength", {}, {"orders": parsed, "p": prime},
          {"length": length}, [f"length: {length}"])


def _build_pair(t1_path, t2_path, params, entry_cap, b_levels, digests):
    t1 = serialize.tree_from_doc(_read(t1_path, digests))
    t2 = serialize.tree_from_doc(_read(t2_path, digests))
    L, D, N, zlen = _parse_params(params)
    layout = build_layout(L, D, N, zlen, entry_cap=entry_cap)
    primes = PrimeTable.for_trees(layout, [t1, t2])
    if b_levels is None:
        b_levels = N - 1
    a = build_group(layout, t1, primes, b_max_level=b_levels)
    b = build_group(layout, t2, primes, b_max_level=b_levels)
    return a, b


@main.group("rigid")
def rigid_group():
    """Transport-map spaces, automorphisms, extraction, type trees."""


@rigid_group.command("hom")
@click.argument("t1_path")
@click.argument("t2_path")
@_layout_options
@click.option("--b-levels", type=int, default=None,
              help="Highest tree-atom level (default: one below the top).")
@click.option("--witness", is_flag=True, help="Include the basis matrices.")
@_wrap
def rigid_hom(t1_path, t2_path, params, entry_cap, b_levels, witness):
    """Dimension of the transport-map space between two builds."""
    digests: dict = {}
    a, b = _build_pair(t1_path, t2_path, params, entry_cap, b_levels, digests)
    space = homs.hom_space(a, b)
    result = {
        "dimension": space.dimension,
        "constraint_rank": space.constraint_rank,
        "source_atoms": a.n_atoms,
        "target_atoms": b.n_atoms,
    }
    if witness:
        result["basis"] = [
            [
                [j, [[i, serialize.fraction_str(c)] for i, c in img.coeffs]]
                for j, img in enumerate(elem.images)
                if img.coeffs
            ]
            for elem in space.basis
        ]
    summary = [
        f"dimension: {space.dimension}",
        f"constraints: {space.constraint_rank}",
    ]
    _emit("rigid hom", digests, {"params": params, "entry_cap": entry_cap},
          result, summary)


@rigid_group.command("auto")
@click.argument("group_path")
@_wrap
def rigid_auto(group_path):
    """Scalar automorphism classification of one build."""
    digests: dict = {}
    g = serialize.group_from_doc(_read(group_path, digests))
    space = homs.hom_space(g, g)
    scalars = homs.classify_automorphisms(g, space)
    result = {
        "scalars": sorted(scalars),
        "endo_dimension": space.dimension,
    }
    summary = [
        "scalars: {%s}" % ", ".join(f"{s:+d}" for s in sorted(scalars, reverse=True)),
        f"endo dimension: {space.dimension}",
    ]
    _emit("rigid auto", digests, {}, result, summary)


@rigid_group.command("extract")
@click.argument("t1_path")
@click.argument("t2_path")
@_layout_options
@click.option("--b-levels", type=int, default=None)
@click.option("--index", type=int, default=None,
              help="Basis element to extract from (default: first that succeeds).")
@_wrap
def rigid_extract(t1_path, t2_path, params, entry_cap, b_levels, index):
    """Extract a tree morphism from a transport-map basis element."""
    digests: dict = {}
    a, b = _build_pair(t1_path, t2_path, params, entry_cap, b_levels, digests)
    space = homs.hom_space(a, b)
    candidates = (
        [space.basis[index]] if index is not None else list(space.basis)
    )
    outcome: dict = {"dimension": space.dimension, "morphism": None, "stall": None}
    summary = [f"dimension: {space.dimension}"]
    for k, elem in enumerate(candidates):
        if elem.is_zero():
            continue
        try:
            morphism = homs.extract_tree_map(elem, a, b)
        except homs.ExtractionStall as e:
            outcome["stall"] = str(e)
            continue
        except ValueError:
            continue
        outcome["morphism"] = sorted([[list(x), list(y)] for x, y in morphism.items()])
        outcome["basis_index"] = index if index is not None else k
        outcome["stall"] = None
        summary.append(f"extracted morphism with {len(morphism.mapping)} nodes")
        break
    if outcome["morphism"] is None:
        summary.append("no morphism extracted")
    _emit("rigid extract", digests, {"params": params, "entry_cap": entry_cap},
          outcome, summary)


@rigid_group.command("typetree")
@click.option("--orders", required=True, help="Cyclic orders, e.g. 2,4.")
@click.option("--depth", type=int, required=True)
@click.option("-o", "--output", default=None, help="Write the tree document here.")
@_wrap
def rigid_typetree(orders, depth, output):
    """Type tree of a finite abelian group presentation."""
    parsed = _parse_orders(orders)
    t = homs.qf_type_tree(parsed, depth)
    doc = serialize.tree_doc(t)
    result = {"nodes": len(t.labels), "distinct_labels": len(set(t.labels.values()))}
    summary = [f"nodes: {len(t.labels)}", f"distinct types: {result['distinct_labels']}"]
    if output:
        Path(output).write_text(doc)
        result["output_digest"] = serialize.digest(doc)
        summary.append(f"written: {output}")
    else:
        result["tree"] = [[list(n), t.labels[n]] for n in sorted(t.labels)]
    _emit("rigid typetree", {}, {"orders": parsed, "depth": depth}, result, summary)


def _parse_subsets(spec: str) -> list[tuple[int, ...]]:
    out = []
    for chunk in spec.split("|"):
        chunk = chunk.strip()
        if not chunk:
            raise click.ClickException("empty subset in --subsets")
        out.append(tuple(int(x) for x in chunk.split(",")))
    return out


@main.group("hfam")
def hfam_group():
    """Distinct-subset families of sequence-atom groups."""


@hfam_group.command("build")
@click.option("--subsets", required=True, help="Offset subsets, e.g. '0,1|0,2|1,2'.")
@_layout_options
@_wrap
def hfam_build(subsets, params, entry_cap):
    """Build the family and report its shape."""
    L, D, N, zlen = _parse_params(params)
    layout = build_layout(L, D, N, zlen, entry_cap=entry_cap)
    family = homs.build_h_family(layout, _parse_subsets(subsets))
    result = {
        "groups": [
            {
                "subset": list(g.subset),
                "atoms": g.n_atoms,
                "block1_indexed": [o.to_doc() for o in g.indexed_ordinals(1)],
            }
            for g in family
        ]
    }
    summary = [f"groups: {len(family)}"] + [
        f"  subset {list(g.subset)}: {g.n_atoms} atoms" for g in family
    ]
    _emit("hfam build", {}, {"params": params, "entry_cap": entry_cap,
                             "subsets": subsets}, result, summary)


@hfam_group.command("distinguish")
@click.option("--subsets", required=True)
@click.option("-i", "index_i", type=int, required=True)
@click.option("-j", "index_j", type=int, required=True)
@_layout_options
@_wrap
def hfam_distinguish(subsets, index_i, index_j, params, entry_cap):
    """Find a safe index whose selector sentence separates two groups."""
    L, D, N, zlen = _parse_params(params)
    layout = build_layout(L, D, N, zlen, entry_cap=entry_cap)
    family = homs.build_h_family(layout, _parse_subsets(subsets))
    alpha, truth_i, truth_j = homs.distinguishing_sentence(index_i, index_j, family)
    result = {
        "alpha": alpha.to_doc(),
        "truth_i": truth_i,
        "truth_j": truth_j,
    }
    summary = [
        f"alpha: {alpha.block},{alpha.offset}",
        f"holds in group {index_i}: {str(truth_i).lower()}",
        f"holds in group {index_j}: {str(truth_j).lower()}",
    ]
    _emit("hfam distinguish", {}, {"params": params, "entry_cap": entry_cap,
                                   "subsets": subsets, "i": index_i, "j": index_j},
          result, summary)


@main.group("game")
def game_group():
    """Partial-isomorphism games on finite abelian groups."""


@game_group.command("ef")
@click.argument("orders_a")
@click.argument("orders_b")
@_wrap
def game_ef(orders_a, orders_b):
    """Back-and-forth equivalence of two finite abelian groups."""
    a = backforth.FiniteAbelianGroup(tuple(_parse_orders(orders_a)))
    b = backforth.FiniteAbelianGroup(tuple(_parse_orders(orders_b)))
    verdict = backforth.ef_equiv(a, b)
    result = {
        "equivalent": verdict,
        "invariant_factors_a": list(backforth.invariant_factors(a)),
        "invariant_factors_b": list(backforth.invariant_factors(b)),
    }
    summary = [f"equivalent: {str(verdict).lower()}"]
    _emit("game ef", {}, {"orders_a": _parse_orders(orders_a),
                          "orders_b": _parse_orders(orders_b)}, result, summary)


if __name__ == "__main__":
    main()
