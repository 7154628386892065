"""Kernel backend selection.

Prefers the compiled extension; falls back to the numpy implementations if
it is missing or fails to import. Set ``KEYSEL_PURE_PYTHON=1`` to force the
fallback (useful for benchmarking and debugging).
"""

import os

from . import _scoring_py

if os.environ.get("KEYSEL_PURE_PYTHON") == "1":
    _impl = _scoring_py
    BACKEND = "python"
else:
    try:
        from . import _scoring_cy as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _scoring_py
        BACKEND = "python"

labeled_neighbor_counts = _impl.labeled_neighbor_counts
cooccurrence_degrees = _impl.cooccurrence_degrees
sgns_train = _impl.sgns_train


def backend_name() -> str:
    return BACKEND
