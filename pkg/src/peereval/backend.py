"""Backend selection for the numeric kernels.

The hot loops in :mod:`peereval.kernels` exist twice: a numba ``@njit``
version and a pure-numpy fallback. The active implementation is chosen per
call from the ``PEEREVAL_BACKEND`` environment variable (``numba`` or
``numpy``); unset, numba is used whenever it imports.
"""

import os

BACKEND_ENV = "PEEREVAL_BACKEND"

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def wrap(func):
            return func

        if args and callable(args[0]):
            return args[0]
        return wrap


def active_backend() -> str:
    """Return "numba" or "numpy" for the current process environment."""
    choice = os.environ.get(BACKEND_ENV, "").strip().lower()
    if choice == "numpy":
        return "numpy"
    if choice == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError(
            f"{BACKEND_ENV}=numba requested but numba is not importable"
        )
    if choice not in ("", "numba"):
        raise RuntimeError(f"unknown {BACKEND_ENV} value {choice!r}")
    return "numba" if NUMBA_AVAILABLE else "numpy"
