"""Stepping-kernel selection.

Prefers the compiled extension; falls back to the pure-Python twin when it is
absent (source install without a compiler). SCREWMECH_FORCE_PYTHON=1 forces
the fallback, which the backend-equivalence tests and benchmarks rely on.
"""

from __future__ import annotations

import os

if os.environ.get("SCREWMECH_FORCE_PYTHON") == "1":
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as kernels

BACKEND = kernels.BACKEND_NAME

simulate_tree = kernels.simulate_tree
simulate_points = kernels.simulate_points
tree_rhs = kernels.tree_rhs
points_rhs = kernels.points_rhs
