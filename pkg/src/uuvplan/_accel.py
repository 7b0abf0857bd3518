"""JIT switch for the numeric kernels.

Kernels are compiled with numba in nopython mode unless ``UUVPLAN_DISABLE_JIT``
is set to a truthy value (or numba is not importable), in which case the very
same source runs as plain Python over numpy arrays.
"""

import os

_FLAG = os.environ.get("UUVPLAN_DISABLE_JIT", "").strip().lower()
DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if DISABLED:
        raise ImportError
    import numba

    HAS_NUMBA = True
except ImportError:
    numba = None
    HAS_NUMBA = False


def jit(func):
    """Compile ``func`` with ``numba.njit`` when available, else return it unchanged."""
    if HAS_NUMBA:
        return numba.njit(cache=True)(func)
    return func


def python_version(func):
    """Return the uncompiled Python function behind a kernel."""
    return getattr(func, "py_func", func)


def backend() -> str:
    return "numba" if HAS_NUMBA else "python"
