"""Kernel backend selection: compiled extension if present, numpy otherwise.

Set ``FORESIGHT_PURE_PYTHON=1`` to force the numpy backend (used by the
benchmark and by tests that compare the two).
"""

import os

from foresight import _kernels_py

if os.environ.get("FORESIGHT_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from foresight import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

superset_sum_inplace = _impl.superset_sum_inplace
accumulate_membership = _impl.accumulate_membership


def available_backends() -> dict[str, object]:
    """Name -> module for every importable backend (for benchmarks/tests)."""
    found: dict[str, object] = {"python": _kernels_py}
    try:
        from foresight import _kernels

        found["compiled"] = _kernels
    except ImportError:
        pass
    return found
