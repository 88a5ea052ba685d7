"""Kernel backend selection.

The compiled kernels are used when importable. Setting the environment
variable ``STABLEHIT_BACKEND=python`` forces the pure-Python fallback.
"""

import os

from . import _kernels_py

_requested = os.environ.get("STABLEHIT_BACKEND", "auto").lower()

if _requested == "python":
    kernels = _kernels_py
else:
    try:
        from . import _ckernels as kernels
    except ImportError:
        if _requested == "cython":
            raise
        kernels = _kernels_py

NAME = "cython" if kernels is not _kernels_py else "python"

available = {"python": _kernels_py}
try:
    from . import _ckernels as _c

    available["cython"] = _c
except ImportError:
    pass
