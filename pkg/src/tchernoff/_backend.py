"""Pick the compiled kernels when available, the NumPy fallback otherwise.

Set ``TCHERNOFF_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("TCHERNOFF_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

jacobi_eigh = _impl.jacobi_eigh
walks_from_uniforms = _impl.walks_from_uniforms
