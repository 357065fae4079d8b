"""Backend selection for the exact integer kernels.

The compiled extension (rigidlab._fastcore) and the pure-Python twin
(rigidlab._purecore) expose the same API and produce identical results;
whichever is importable wins, compiled first.  Set RIGIDLAB_BACKEND=pure
to force the fallback (used by the backend-equivalence tests and the
benchmark).
"""

from __future__ import annotations

import os

from . import _purecore

if os.environ.get("RIGIDLAB_BACKEND", "").lower() == "pure":
    _impl = _purecore
else:
    try:
        from . import _fastcore as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _purecore

BACKEND = _impl.BACKEND_NAME

xgcd = _impl.xgcd
IntLattice = _impl.IntLattice
right_kernel_lattice = _impl.right_kernel_lattice
smith_normal_form = _impl.smith_normal_form
tree_embed_dp = _impl.tree_embed_dp
tree_embed_search = _impl.tree_embed_search
