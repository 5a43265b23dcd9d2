"""numba switch.

Set ``MOTIFEVAL_DISABLE_NUMBA=1`` before import to run every kernel as plain
Python over numpy arrays (slow, but handy for debugging and for checking the
compiled path against the interpreted one).
"""

import os

DISABLED = os.environ.get("MOTIFEVAL_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if DISABLED:
        raise ImportError
    from numba import njit as _numba_njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def njit(func):
    if HAVE_NUMBA:
        return _numba_njit(cache=True, nogil=True)(func)
    return func


def python_version(func):
    """The uncompiled function behind a kernel."""
    return getattr(func, "py_func", func)
