"""NumPy/SciPy fallback implementations of the solver hot kernels.

Same call signatures as the compiled extension.  The tridiagonal paths lean
on LAPACK banded routines; CG is a vectorized python loop.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

BACKEND_NAME = "python"


def tridiag_factor(main: np.ndarray, off: np.ndarray):
    """Cholesky-factor a symmetric positive definite tridiagonal matrix.

    Returns an opaque factor object for tridiag_solve_factored; raises
    numpy.linalg.LinAlgError if the matrix is not positive definite.
    """
    n = main.shape[0]
    ab = np.zeros((2, n))
    ab[0, 1:] = off
    ab[1] = main
    try:
        return scipy.linalg.cholesky_banded(ab, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(str(exc)) from exc


def tridiag_solve_factored(factor, b: np.ndarray) -> np.ndarray:
    return scipy.linalg.cho_solve_banded((factor, False), b, check_finite=False)


def tridiag_solve(main: np.ndarray, off: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve the symmetric tridiagonal system for one or many right-hand sides."""
    return tridiag_solve_factored(tridiag_factor(main, off), b)


def cg_shifted(
    data: np.ndarray,
    indices: np.ndarray,
    indptr: np.ndarray,
    shift: float,
    b: np.ndarray,
    rel_tol: float,
    max_iter: int,
):
    """Unpreconditioned CG on (A - shift*I) x = b for CSR-stored symmetric A.

    Returns (x, relative_residual, iterations, flag) with flag 0 on
    convergence, 1 on iteration-limit, 2 on indefiniteness (nonpositive
    curvature detected).
    """
    import scipy.sparse as sp

    n = b.shape[0]
    a = sp.csr_matrix((data, indices, indptr), shape=(n, n))

    def op(v):
        return a @ v - shift * v

    x = np.zeros_like(b)
    r = b.copy()
    bnorm = float(np.linalg.norm(b))
    if bnorm == 0.0:
        return x, 0.0, 0, 0
    p = r.copy()
    rs = float(r @ r)
    for it in range(1, max_iter + 1):
        ap = op(p)
        curv = float(p @ ap)
        if curv <= 0.0:
            return x, np.sqrt(rs) / bnorm, it, 2
        alpha = rs / curv
        x += alpha * p
        r -= alpha * ap
        rs_new = float(r @ r)
        if np.sqrt(rs_new) <= rel_tol * bnorm:
            return x, np.sqrt(rs_new) / bnorm, it, 0
        p = r + (rs_new / rs) * p
        rs = rs_new
    return x, np.sqrt(rs) / bnorm, max_iter, 1
