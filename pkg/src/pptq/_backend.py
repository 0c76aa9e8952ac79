"""Kernel backend selection.

The hot kernels (partial transpose, Dykstra feasibility loops) exist in two
twin implementations: numba-compiled and pure numpy. The environment variable
PPTQ_BACKEND picks one:

    PPTQ_BACKEND=auto    (default) numba when importable, else numpy
    PPTQ_BACKEND=numba   require numba, fail loudly if missing
    PPTQ_BACKEND=numpy   force the pure-numpy fallback
"""

import os

_ENV_VAR = "PPTQ_BACKEND"


def _load(choice):
    if choice == "numpy":
        from . import _kernels_numpy
        return _kernels_numpy
    if choice == "numba":
        from . import _kernels_numba
        return _kernels_numba
    raise ValueError(f"unknown backend {choice!r}")


def select_backend():
    choice = os.environ.get(_ENV_VAR, "auto").strip().lower()
    if choice in ("numba", "numpy"):
        return _load(choice)
    if choice != "auto":
        raise ValueError(
            f"{_ENV_VAR} must be one of auto/numba/numpy, got {choice!r}"
        )
    try:
        return _load("numba")
    except ImportError:
        return _load("numpy")


kernels = select_backend()


def backend_name():
    """Name of the active kernel backend ('numba' or 'numpy')."""
    return kernels.BACKEND_NAME
