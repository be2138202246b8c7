"""Kernel backend selection.

The compiled Cython extension is preferred; the numpy implementation is the
fallback.  Set CCSKETCH_BACKEND=python (or =compiled) to force one.
"""

import os

_requested = os.environ.get("CCSKETCH_BACKEND", "auto").strip().lower()

if _requested in ("", "auto"):
    try:
        from . import _kernels as kernels
    except ImportError:
        from . import _kernels_py as kernels
elif _requested in ("compiled", "cython", "c"):
    from . import _kernels as kernels
elif _requested in ("python", "numpy", "pure"):
    from . import _kernels_py as kernels
else:
    raise ImportError(f"unknown CCSKETCH_BACKEND={_requested!r}; "
                      f"use 'auto', 'compiled' or 'python'")

BACKEND = kernels.BACKEND


def available_backends():
    """Names of the kernel backends importable in this installation."""
    names = []
    try:
        from . import _kernels  # noqa: F401
        names.append("compiled")
    except ImportError:
        pass
    names.append("python")
    return names
