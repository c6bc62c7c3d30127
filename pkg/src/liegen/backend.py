"""Numba/numpy backend selection for the hot kernels.

The heavy inner loops (subgroup closure, pair classification, Monte Carlo
blocks) exist twice: as scalar kernels compiled with numba.njit, and as
vectorized pure-numpy implementations.  Setting the environment variable
LIEGEN_DISABLE_NUMBA=1 before import switches the default to the numpy
path; most driver functions also accept an explicit ``backend=`` argument
so both paths can be exercised (and benchmarked) in one process.
"""

import os

from .errors import InvalidConfig

DISABLE_ENV = "LIEGEN_DISABLE_NUMBA"

try:
    if os.environ.get(DISABLE_ENV, "") not in ("", "0"):
        raise ImportError("numba disabled via " + DISABLE_ENV)
    from numba import njit as _njit
    HAS_NUMBA = True
except ImportError:
    _njit = None
    HAS_NUMBA = False

DEFAULT_BACKEND = "numba" if HAS_NUMBA else "numpy"


def maybe_njit(*args, **kwargs):
    """numba.njit(cache=True, nogil=True) when numba is active, identity
    decorator otherwise.  Usable bare or with options."""
    opts = dict(cache=True, nogil=True)
    opts.update(kwargs)

    def wrap(fn):
        if HAS_NUMBA:
            return _njit(**opts)(fn)
        return fn

    if len(args) == 1 and callable(args[0]):
        return wrap(args[0])
    return wrap


def resolve_backend(backend=None):
    if backend is None:
        return DEFAULT_BACKEND
    if backend not in ("numba", "numpy"):
        raise InvalidConfig(f"unknown backend {backend!r}")
    if backend == "numba" and not HAS_NUMBA:
        raise InvalidConfig("numba backend requested but numba is unavailable")
    return backend
