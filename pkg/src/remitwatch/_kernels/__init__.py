"""Kernel backend selection.

Prefers the compiled extension; falls back to the numpy implementation
when the extension was not built. REMITWATCH_PURE_PYTHON=1 forces the
fallback (used by the parity tests and the benchmark).
"""

import os

from . import py_backend

if os.environ.get("REMITWATCH_PURE_PYTHON") == "1":
    _impl = py_backend
else:
    try:
        from . import _tree_kernel as _impl
    except ImportError:
        _impl = py_backend

scan_split = _impl.scan_split
predict_tree = _impl.predict_tree
predict_forest = _impl.predict_forest


def backend_name() -> str:
    return _impl.NAME


def get_backend(name: str):
    """Explicit backend lookup: 'python' or 'compiled'."""
    if name == "python":
        return py_backend
    from . import _tree_kernel
    return _tree_kernel
