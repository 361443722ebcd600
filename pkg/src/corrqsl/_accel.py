"""Numba switch for the hot array kernels.

Set ``CORRQSL_DISABLE_NUMBA=1`` to force the pure-numpy path. Every kernel in
the package exists in both forms; the public name binds to one of them at
import time.
"""
import os

_FALSY = {"", "0", "false", "no", "off"}

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional speedup
    numba = None

NUMBA_DISABLED = os.environ.get("CORRQSL_DISABLE_NUMBA", "").strip().lower() not in _FALSY
USE_NUMBA = numba is not None and not NUMBA_DISABLED


def njit(fn):
    """Compile ``fn`` with numba when it is importable, else return it unchanged.

    The compiled object is always built (when numba exists) so that tests and
    benchmarks can compare both paths regardless of the env flag.
    """
    if numba is None:
        return fn
    return numba.njit(cache=True, fastmath=False)(fn)


def pick(compiled, fallback):
    return compiled if USE_NUMBA else fallback
