"""Numba switch.

Kernels are decorated with :func:`njit` from this module. Setting
``SPANEXCESS_DISABLE_NUMBA=1`` (or running without numba installed) turns the
decorator into a no-op, so the same kernels execute as plain Python on numpy
arrays and the batch drivers take their vectorised numpy path instead.
"""

import os

_FLAG = "SPANEXCESS_DISABLE_NUMBA"


def _noop_jit(*args, **kwargs):
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def wrap(f):
        return f

    return wrap


def _have_numba():
    try:
        import numba  # noqa: F401

        return True
    except ImportError:
        return False


HAVE_NUMBA = _have_numba()
USE_NUMBA = HAVE_NUMBA and os.environ.get(_FLAG, "").strip().lower() not in ("1", "true", "yes", "on")

if USE_NUMBA:
    import numba

    def njit(*args, **kwargs):
        kwargs.setdefault("cache", True)
        if len(args) == 1 and callable(args[0]):
            return numba.njit(**kwargs)(args[0])
        return numba.njit(*args, **kwargs)

else:
    njit = _noop_jit


def py(func):
    """Return the pure-Python body of a (possibly jitted) kernel."""
    return getattr(func, "py_func", func)


def default_backend():
    return "numba" if USE_NUMBA else "numpy"
