"""Optional numba acceleration.

Set ``GEOSHOOT_DISABLE_NUMBA=1`` to run every kernel as plain Python/numpy.
The kernels are written in the subset of Python that numba compiles, so both
paths execute the same source.
"""

import os

_DISABLED = os.environ.get("GEOSHOOT_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError
    import numba

    USE_NUMBA = True
except ImportError:
    numba = None
    USE_NUMBA = False


def njit(func):
    if USE_NUMBA:
        return numba.njit(cache=True)(func)
    return func


def backend():
    return "numba" if USE_NUMBA else "python"
