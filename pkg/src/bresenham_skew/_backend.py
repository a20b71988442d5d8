"""Backend selection for the hot integer kernels.

Set ``BRESENHAM_SKEW_BACKEND=numpy`` to force the pure-numpy path; the
default is ``numba`` whenever numba is installed. numba itself is imported on
first use so that small jobs do not pay for loading LLVM.
"""

import functools
import importlib.util
import os

ENV_FLAG = "BRESENHAM_SKEW_BACKEND"

HAVE_NUMBA = importlib.util.find_spec("numba") is not None


def _requested() -> str:
    value = os.environ.get(ENV_FLAG, "numba").strip().lower()
    if value not in ("numba", "numpy"):
        raise ValueError(f"{ENV_FLAG} must be 'numba' or 'numpy', got {value!r}")
    return value


BACKEND = "numba" if (_requested() == "numba" and HAVE_NUMBA) else "numpy"


@functools.cache
def njit(func):
    """numba-compiled version of ``func`` (compiled or loaded once, then cached)."""
    import numba

    return numba.njit(cache=True, nogil=True)(func)
