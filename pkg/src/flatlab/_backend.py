"""Kernel backend selection.

Imports the compiled accelerator when present, otherwise the numpy
fallback.  Set FLATLAB_PURE=1 to force the fallback (used by the
parity tests and the benchmark).
"""

import os

if os.environ.get("FLATLAB_PURE") == "1":
    from flatlab import _corepy as _impl
else:
    try:
        from flatlab import _speedups as _impl  # type: ignore[attr-defined]
    except ImportError:
        from flatlab import _corepy as _impl

singer_exponent_scan = _impl.singer_exponent_scan
direct_grid_eval = _impl.direct_grid_eval
direct_angle_eval = _impl.direct_angle_eval


def backend_name() -> str:
    """Name of the active kernel backend ('cython' or 'python')."""
    return _impl.BACKEND
