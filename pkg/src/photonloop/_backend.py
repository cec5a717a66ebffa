"""Selects the circulation-kernel backend at import time.

The compiled extension is preferred; the pure-Python twin is used when the
extension is unavailable or when ``PHOTONLOOP_PURE_PYTHON`` is set to a
non-empty value other than ``0``. Both produce bit-identical results.
"""

import os

if os.environ.get("PHOTONLOOP_PURE_PYTHON", "0") not in ("", "0"):
    from . import _kernels_py as kernels

    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as kernels

        BACKEND = "python"


def backend_name():
    """Name of the active kernel backend: ``"cython"`` or ``"python"``."""
    return BACKEND
