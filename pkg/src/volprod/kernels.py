"""Hull kernel backend selection.

The compiled extension (volprod._kernels_cy, built from Cython) is used
when importable; otherwise the pure-Python reference in _kernels_py takes
over.  Set VOLPROD_PURE=1 to force the fallback.  Both backends implement
the same algorithms in the same operation order and return identical
results; benchmarks/bench_kernels.py compares them.
"""

import os

from . import _kernels_py

if os.environ.get("VOLPROD_PURE") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

hull2d = _impl.hull2d
hull3d = _impl.hull3d
BACKEND = _impl.BACKEND


def backend_name() -> str:
    """Name of the active kernel backend ('cython' or 'python')."""
    return BACKEND
