"""Numba toggle.

Kernels in :mod:`entbound.kernels` come in two flavours: loop-style code
compiled with ``numba.njit`` and vectorised numpy code. The compiled path is
used when numba imports cleanly and ``ENTB_DISABLE_NUMBA`` is unset (or
``0``). Set ``ENTB_DISABLE_NUMBA=1`` to force the pure-numpy path.
"""
from __future__ import annotations

import os

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None


def _env_disabled() -> bool:
    return os.environ.get("ENTB_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")


USE_NUMBA = numba is not None and not _env_disabled()


def njit(f=None, **options):
    """``numba.njit`` when numba is available, identity otherwise.

    The decorated function is compiled lazily; whether it is *called* is
    decided by the dispatchers in :mod:`entbound.kernels`, not here.
    """
    options.setdefault("cache", True)

    def wrap(fn):
        if numba is None:
            return fn
        return numba.njit(**options)(fn)

    return wrap if f is None else wrap(f)


def max_workers() -> int:
    """Thread cap from ``ENTB_THREADS`` (defaults to 1)."""
    raw = os.environ.get("ENTB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
