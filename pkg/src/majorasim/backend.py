"""Backend selection for the jitted numeric kernels.

MAJORASIM_BACKEND picks the implementation of the hot loops (RK4 propagator
integration, Pfaffian elimination):

    auto   use numba when importable, else numpy   (default)
    numba  require numba, fail loudly if missing
    numpy  pure-numpy reference path

Both paths run the same source; `numba.njit` is applied to the reference
functions, so results agree to floating-point roundoff.  The choice is made
once at import.
"""

from __future__ import annotations

import os

_CHOICES = ("auto", "numba", "numpy")
_requested = os.environ.get("MAJORASIM_BACKEND", "auto").strip().lower()
if _requested not in _CHOICES:
    raise RuntimeError(
        f"MAJORASIM_BACKEND must be one of {_CHOICES}, got {_requested!r}"
    )

if _requested == "numpy":
    _njit = None
else:
    try:
        from numba import njit as _njit
    except ImportError:
        if _requested == "numba":
            raise
        _njit = None

USING_NUMBA = _njit is not None


def backend_name() -> str:
    return "numba" if USING_NUMBA else "numpy"


def maybe_jit(func):
    """Jit on the numba backend, else return func unchanged.

    nogil lets sweep worker threads overlap; the kernels are pure numeric
    nopython code with caller-owned buffers, so releasing the GIL is safe.
    """
    if _njit is None:
        return func
    return _njit(cache=True, nogil=True)(func)
