"""Backend selection for the solver kernels.

The kernels are plain Python functions over numpy arrays.  With numba
available they are compiled with ``njit``; setting ``URSA_NUMBA=0`` runs
the very same functions uncompiled, which is slow but useful for
debugging and for cross-checking the compiled code.
"""

from __future__ import annotations

import os

USE_NUMBA = os.environ.get("URSA_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False


def kernel(fn):
    if USE_NUMBA:
        return njit(cache=True, nogil=True)(fn)
    return fn


BACKEND = "numba" if USE_NUMBA else "python"
