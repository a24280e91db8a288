"""Backend selection for the hot tree kernels.

The compiled ``_kernels`` extension is used when it imports; otherwise the
pure-Python ``_kernels_py`` module.  Setting ``SUSLINBENCH_PURE=1`` forces
the fallback.
"""
import os

from . import _kernels_py

if os.environ.get("SUSLINBENCH_PURE", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

ancestor_table = _impl.ancestor_table
lex_matrix = _impl.lex_matrix
order_violations = _impl.order_violations
meet_violations = _impl.meet_violations

__all__ = ["BACKEND", "ancestor_table", "lex_matrix", "order_violations", "meet_violations"]
