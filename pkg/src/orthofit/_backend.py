"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy fallback.
Set ``ORTHOFIT_BACKEND=python`` to force the fallback.
"""

import os

from . import _pykernels

_requested = os.environ.get("ORTHOFIT_BACKEND", "auto").lower()

kernels = _pykernels
BACKEND = "python"

if _requested not in ("python", "py", "pure"):
    try:
        from . import _kernels as kernels  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        if _requested in ("cython", "compiled"):
            raise

__all__ = ["kernels", "BACKEND"]
