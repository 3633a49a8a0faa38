"""Kernel backend selection.

The compiled extension is used when importable; ``MAPDA_PURE_PYTHON=1`` forces
the fallback. ``BACKEND`` names the active one.
"""

import os

from . import _kernels_py

_compiled = None
if os.environ.get("MAPDA_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

_impl = _compiled if _compiled is not None else _kernels_py
BACKEND = "compiled" if _compiled is not None else "python"

column_repeat = _impl.column_repeat
pair_scan = _impl.pair_scan
row_counts = _impl.row_counts
relabel = _impl.relabel


def backends():
    """Available implementations keyed by name (for benchmarks and tests)."""
    out = {"python": _kernels_py}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out
