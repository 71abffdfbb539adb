# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled solver hot kernels: Thomas elimination and shifted CG.

Mirrors the _pykernels call signatures; selected automatically at import
when the extension built.
"""

from libc.math cimport sqrt

import numpy as np

BACKEND_NAME = "cython"


cdef int _factor(double[::1] main, double[::1] off, double[::1] low, double[::1] piv) nogil:
    # LU of the symmetric tridiagonal matrix (no pivoting); pivots equal the
    # LDL^T diagonal, so a nonpositive pivot flags an indefinite matrix.
    cdef Py_ssize_t n = main.shape[0]
    cdef Py_ssize_t i
    piv[0] = main[0]
    if piv[0] <= 0.0:
        return 1
    for i in range(1, n):
        low[i] = off[i - 1] / piv[i - 1]
        piv[i] = main[i] - low[i] * off[i - 1]
        if piv[i] <= 0.0:
            return 1
    return 0


cdef void _solve_one(double[::1] off, double[::1] low, double[::1] piv,
                     double[:] b, double[:] x) nogil:
    cdef Py_ssize_t n = piv.shape[0]
    cdef Py_ssize_t i
    x[0] = b[0]
    for i in range(1, n):
        x[i] = b[i] - low[i] * x[i - 1]
    x[n - 1] = x[n - 1] / piv[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = (x[i] - off[i] * x[i + 1]) / piv[i]


def tridiag_factor(main, off):
    """Factor a symmetric positive definite tridiagonal matrix.

    Raises numpy.linalg.LinAlgError when a nonpositive pivot appears.
    """
    main = np.ascontiguousarray(main, dtype=np.float64)
    off = np.ascontiguousarray(off, dtype=np.float64)
    cdef Py_ssize_t n = main.shape[0]
    low_arr = np.zeros(n)
    piv_arr = np.zeros(n)
    cdef double[::1] mv_main = main
    cdef double[::1] mv_off = off
    cdef double[::1] low = low_arr
    cdef double[::1] piv = piv_arr
    cdef int bad
    with nogil:
        bad = _factor(mv_main, mv_off, low, piv)
    if bad:
        raise np.linalg.LinAlgError("tridiagonal matrix is not positive definite")
    return (off, low_arr, piv_arr)


def tridiag_solve_factored(factor, b):
    off_arr, low_arr, piv_arr = factor
    b = np.asarray(b, dtype=np.float64)
    cdef double[::1] off = off_arr
    cdef double[::1] low = low_arr
    cdef double[::1] piv = piv_arr
    cdef Py_ssize_t n = piv.shape[0]
    cdef Py_ssize_t j, nrhs
    if b.ndim == 1:
        x1 = np.empty(n)
        _solve_one(off, low, piv, np.ascontiguousarray(b), x1)
        return x1
    nrhs = b.shape[1]
    bf = np.asfortranarray(b)
    xf = np.empty((n, nrhs), order="F")
    for j in range(nrhs):
        _solve_one(off, low, piv, bf[:, j], xf[:, j])
    return np.ascontiguousarray(xf)


def tridiag_solve(main, off, b):
    """Solve the symmetric tridiagonal system for one or many right-hand sides."""
    return tridiag_solve_factored(tridiag_factor(main, off), b)


def cg_shifted(double[::1] data, int[::1] indices, int[::1] indptr,
               double shift, double[::1] b, double rel_tol, int max_iter):
    """Unpreconditioned CG on (A - shift*I) x = b, CSR-stored symmetric A.

    Returns (x, relative_residual, iterations, flag); flag 0 converged,
    1 iteration limit, 2 indefinite (nonpositive curvature).
    """
    cdef Py_ssize_t n = b.shape[0]
    x_arr = np.zeros(n)
    r_arr = np.empty(n)
    p_arr = np.empty(n)
    ap_arr = np.zeros(n)
    cdef double[::1] x = x_arr
    cdef double[::1] r = r_arr
    cdef double[::1] p = p_arr
    cdef double[::1] ap = ap_arr
    cdef double bnorm2 = 0.0, rs, rs_new, curv, alpha, beta, acc, tol2
    cdef Py_ssize_t i, it, row, iters
    cdef int flag = 1
    for i in range(n):
        bnorm2 += b[i] * b[i]
        r[i] = b[i]
        p[i] = b[i]
    if bnorm2 == 0.0:
        return x_arr, 0.0, 0, 0
    rs = bnorm2
    tol2 = rel_tol * rel_tol * bnorm2
    iters = max_iter
    with nogil:
        for it in range(1, max_iter + 1):
            for row in range(n):
                acc = -shift * p[row]
                for i in range(indptr[row], indptr[row + 1]):
                    acc += data[i] * p[indices[i]]
                ap[row] = acc
            curv = 0.0
            for i in range(n):
                curv += p[i] * ap[i]
            if curv <= 0.0:
                flag = 2
                iters = it
                break
            alpha = rs / curv
            rs_new = 0.0
            for i in range(n):
                x[i] += alpha * p[i]
                r[i] -= alpha * ap[i]
                rs_new += r[i] * r[i]
            if rs_new <= tol2:
                flag = 0
                iters = it
                rs = rs_new
                break
            beta = rs_new / rs
            rs = rs_new
            for i in range(n):
                p[i] = r[i] + beta * p[i]
    return x_arr, sqrt(rs / bnorm2), iters, flag
