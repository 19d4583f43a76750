"""Numba dispatch.

Hot kernels are compiled with numba when it is importable.  Setting the
environment variable ``GFORMS_NO_NUMBA=1`` forces the pure-numpy code paths,
which compute identical results (used by the benchmark and by the
cross-implementation tests).
"""
from __future__ import annotations

import os

_flag = os.environ.get("GFORMS_NO_NUMBA", "").strip().lower()

try:
    import numba as _numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _flag not in ("1", "true", "yes", "on")


def njit(*args, **kwargs):
    """``numba.njit(cache=True)`` when available, identity decorator otherwise."""
    kwargs.setdefault("cache", True)
    if HAVE_NUMBA:
        return _numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]):
        return args[0]
    return lambda f: f


def resolve_impl(impl: str | None) -> str:
    """Map an ``impl`` argument (None, 'numba', 'numpy') to a concrete choice."""
    if impl is None:
        return "numba" if USE_NUMBA else "numpy"
    if impl not in ("numba", "numpy"):
        raise ValueError(f"unknown kernel implementation {impl!r}")
    if impl == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    return impl
