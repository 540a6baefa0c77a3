"""Selects the compiled kernels when available.

Set ``PTDEPHASE_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
kernels = _kernels_py

if not os.environ.get("PTDEPHASE_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        kernels = _compiled
        BACKEND = "compiled"


def use(name):
    """Switch backend at runtime (``"compiled"`` or ``"python"``); used by the
    benchmark and the backend-parity tests."""
    global kernels, BACKEND
    if name == "python":
        kernels, BACKEND = _kernels_py, "python"
    elif name == "compiled":
        from . import _kernels as _compiled
        kernels, BACKEND = _compiled, "compiled"
    else:
        raise ValueError(f"unknown backend {name!r}")
    return kernels
