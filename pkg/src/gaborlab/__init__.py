"""Gabor frames and superframes with Hermite windows.

Numerical machinery for the planar theory: Weierstrass sigma functions on
arbitrary lattices, Bargmann-transform representations of Hermite windows,
explicit dual-window construction for densities below the critical value
1/(n+1), and certification through Wexler-Raz biorthogonality, Janssen
bounds, Zak-transform criteria, and reconstruction tests.

Set GABORLAB_THREADS before importing to cap BLAS/OpenMP parallelism;
set GABORLAB_BACKEND to "numpy" or "numba" to pin the kernel backend.
"""

import os as _os


def _configure_threads():
    raw = _os.environ.get("GABORLAB_THREADS")
    if not raw:
        return None
    try:
        cap = max(1, int(raw))
    except ValueError:
        return None
    for var in (
        "OMP_NUM_THREADS",
        "OPENBLAS_NUM_THREADS",
        "MKL_NUM_THREADS",
        "NUMEXPR_NUM_THREADS",
        "NUMBA_NUM_THREADS",
    ):
        _os.environ.setdefault(var, str(cap))
    return cap


# Must run before numpy is pulled in by the submodules below.
THREAD_CAP = _configure_threads()

from .errors import (  # noqa: E402
    GaborlabError,
    ConfigError,
    DensityError,
    AccuracyError,
    ResourceError,
    PoleError,
    DivergenceError,
    TruncationDomainError,
    OrderCapError,
)
from .lattice import Lattice2D, from_generators, adjoint, conjugate  # noqa: E402
from .elliptic import WeierstrassContext, build_context  # noqa: E402
from .hermite_bargmann import (  # noqa: E402
    SampledSignal,
    hermite_eval,
    hermite_signal,
    bargmann,
    stft_hermite,
    hermite_gram_entry,
    fock_shift,
    fock_norms,
    MonomialBasis,
    SigmaPower,
    LinearCombination,
)
from .dual_window import DualWindowModel, solve_coefficients, build_S  # noqa: E402
from .frame import FrameReport, classify, analyze  # noqa: E402
from .zak import ZakGrid, zak_transform, half_integer_criterion  # noqa: E402

__version__ = "0.1.0"

__all__ = [
    "THREAD_CAP",
    "GaborlabError",
    "ConfigError",
    "DensityError",
    "AccuracyError",
    "ResourceError",
    "PoleError",
    "DivergenceError",
    "TruncationDomainError",
    "OrderCapError",
    "Lattice2D",
    "from_generators",
    "adjoint",
    "conjugate",
    "WeierstrassContext",
    "build_context",
    "SampledSignal",
    "hermite_eval",
    "hermite_signal",
    "bargmann",
    "stft_hermite",
    "hermite_gram_entry",
    "fock_shift",
    "fock_norms",
    "MonomialBasis",
    "SigmaPower",
    "LinearCombination",
    "DualWindowModel",
    "solve_coefficients",
    "build_S",
    "FrameReport",
    "classify",
    "analyze",
    "ZakGrid",
    "zak_transform",
    "half_integer_criterion",
]
