"""Optional numba acceleration.

Set ``SURGERYGON_DISABLE_NUMBA=1`` to force the pure-numpy code paths, e.g.
for debugging or to compare timings.
"""

from __future__ import annotations

import os

__all__ = ["NUMBA_AVAILABLE", "njit", "use_numba"]

_disabled = os.environ.get("SURGERYGON_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _disabled:
        raise ImportError
    from numba import njit as _njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - depends on environment
    NUMBA_AVAILABLE = False
    _njit = None


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise a no-op decorator."""
    if NUMBA_AVAILABLE:
        return _njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


def use_numba() -> bool:
    return NUMBA_AVAILABLE
