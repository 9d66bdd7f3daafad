"""JIT backend selection.

Hot kernels in :mod:`polarssc._kernels` are decorated with :func:`njit`.
By default this is numba's ``njit``; setting the environment variable
``POLARSSC_DISABLE_NUMBA=1`` (or numba being unimportable) swaps in a no-op
decorator so the same kernel source runs as plain Python/numpy. Both backends
execute identical IEEE-754 arithmetic, so decode results are bit-identical;
only speed differs.
"""

import os


def _noop_njit(*args, **kwargs):
    if args and callable(args[0]):
        return args[0]

    def wrap(fn):
        return fn

    return wrap


_disabled = os.environ.get("POLARSSC_DISABLE_NUMBA", "").strip().lower() in (
    "1",
    "true",
    "yes",
    "on",
)

if _disabled:
    njit = _noop_njit
    NUMBA_ENABLED = False
else:
    try:
        from numba import njit  # noqa: F401

        NUMBA_ENABLED = True
    except ImportError:
        njit = _noop_njit
        NUMBA_ENABLED = False


def backend_name() -> str:
    """Name of the active kernel backend ("numba" or "python")."""
    return "numba" if NUMBA_ENABLED else "python"
