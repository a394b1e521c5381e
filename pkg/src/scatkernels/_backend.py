"""Kernel backend selection.

``SCATKERNELS_BACKEND=numpy`` forces the pure-numpy path; the default is
numba when it imports cleanly. The choice is fixed at import time.
"""

import logging
import os

logger = logging.getLogger(__name__)

_requested = os.environ.get("SCATKERNELS_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"SCATKERNELS_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numba":
    try:
        from . import _numba_kernels as kernels
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is a declared dependency
        logger.warning("numba unavailable, falling back to numpy kernels")
        from . import _numpy_kernels as kernels
        BACKEND = "numpy"
else:
    from . import _numpy_kernels as kernels
    BACKEND = "numpy"

__all__ = ["BACKEND", "kernels"]
