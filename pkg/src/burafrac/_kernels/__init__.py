"""Solver kernel backend selection.

The compiled extension is preferred when present; the NumPy/SciPy fallback
keeps the package fully functional without it.  ``BACKEND`` names the active
implementation; ``get_backend(name)`` returns a specific one (used by the
parity tests and the benchmark).
"""

from . import _pykernels

try:
    from . import _cykernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"

tridiag_factor = _impl.tridiag_factor
tridiag_solve_factored = _impl.tridiag_solve_factored
tridiag_solve = _impl.tridiag_solve
cg_shifted = _impl.cg_shifted


def get_backend(name: str):
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _cykernels

        return _cykernels
    raise ValueError(f"unknown kernel backend {name!r}")
