"""rigidlab: labeled-tree quasi-orders, finite truncations of
divisibility-built torsion-free groups, recursive formula evaluators,
and the algorithms of their rigidity arguments.

Exact rational arithmetic throughout; the hot integer kernels run on a
compiled core when available (see rigidlab.kernels.BACKEND).
"""

from .kernels import BACKEND
from .ordinals import BlockLayout, Ordinal, build_layout, is_safe, z_sequences
from .trees import (
    LabeledTree,
    QuasiOrderTable,
    TreeMorphism,
    antichain_pairs,
    check_morphism,
    embeds,
    embeds_bruteforce,
    find_embedding,
)
from .partition import ColoringTable, attempt_tree_size, search_shift_invariant
from .groups import (
    Atom,
    GroupElement,
    PrimeTable,
    TruncatedGroup,
    build_group,
    contains,
    decompose,
    divides_pinf,
)
from .formulas import eval_phi, eval_psi, p_length, psi_satisfiable, unfold_psi
from .homs import (
    HomElement,
    HomSpace,
    QfType,
    build_h_family,
    classify_automorphisms,
    distinguishing_sentence,
    extract_tree_map,
    hom_from_tree_embedding,
    hom_space,
    qf_type,
    qf_type_tree,
)
from .backforth import FiniteAbelianGroup, ef_equiv, invariant_factors, is_partial_iso

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Atom",
    "BlockLayout",
    "ColoringTable",
    "FiniteAbelianGroup",
    "GroupElement",
    "HomElement",
    "HomSpace",
    "LabeledTree",
    "Ordinal",
    "PrimeTable",
    "QfType",
    "QuasiOrderTable",
    "TreeMorphism",
    "TruncatedGroup",
    "antichain_pairs",
    "attempt_tree_size",
    "build_group",
    "build_h_family",
    "build_layout",
    "check_morphism",
    "classify_automorphisms",
    "contains",
    "decompose",
    "distinguishing_sentence",
    "divides_pinf",
    "ef_equiv",
    "embeds",
    "embeds_bruteforce",
    "eval_phi",
    "eval_psi",
    "extract_tree_map",
    "find_embedding",
    "hom_from_tree_embedding",
    "hom_space",
    "invariant_factors",
    "is_partial_iso",
    "is_safe",
    "p_length",
    "psi_satisfiable",
    "qf_type",
    "qf_type_tree",
    "search_shift_invariant",
    "unfold_psi",
    "z_sequences",
]
