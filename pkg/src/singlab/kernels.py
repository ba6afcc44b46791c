"""Kernel backend selection.

The compiled extension is used when it imports; setting the environment
variable ``SINGLAB_PURE_PYTHON=1`` forces the pure-Python fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
rk4_hemisphere = _kernels_py.rk4_hemisphere

if os.environ.get("SINGLAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None
    if _compiled is not None:
        BACKEND = "compiled"
        rk4_hemisphere = _compiled.rk4_hemisphere

__all__ = ["BACKEND", "rk4_hemisphere"]
