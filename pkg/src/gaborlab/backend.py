"""Kernel backend selection.

The hot numerical loops (Weierstrass series core, Hermite recurrence,
Zak summation) exist twice: a numba-jitted version and a pure-numpy
version with identical signatures. GABORLAB_BACKEND picks one:

    auto   use numba when importable, else numpy (default)
    numba  require numba, error if unavailable
    numpy  force the pure-numpy path

Both backends are exercised against each other in the test suite.
"""

import os

from .errors import ConfigError

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

_VALID = ("auto", "numba", "numpy")


def requested_backend() -> str:
    name = os.environ.get("GABORLAB_BACKEND", "auto").strip().lower()
    if name not in _VALID:
        raise ConfigError(
            f"GABORLAB_BACKEND must be one of {_VALID}, got {name!r}"
        )
    return name


def active_backend() -> str:
    """Resolve the backend that get_kernels() will return right now."""
    name = requested_backend()
    if name == "auto":
        return "numba" if HAS_NUMBA else "numpy"
    if name == "numba" and not HAS_NUMBA:
        raise ConfigError("GABORLAB_BACKEND=numba but numba is not importable")
    return name


def get_kernels():
    """Return the kernel module for the active backend."""
    if active_backend() == "numba":
        from . import _kernels_numba

        return _kernels_numba
    from . import _kernels_numpy

    return _kernels_numpy
