"""Exact spectral reference for fractional solves and energy norms.

For the model 1D Laplacian the eigenpairs are analytic sine vectors, so
projections onto the eigenbasis reduce to the orthonormal DST-I (which is
its own inverse); general normalized matrices take a dense symmetric
eigendecomposition under a size cap.  Everything downstream (error reports,
bound checks) is built on A^p f = W D^p W^T f.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import dst

from .errors import DimensionTooLarge
from .fractions import PartialFractionForm
from .matrices import NormalizedMatrix, laplacian_1d_eigenvalues
from .solver import SolverConfig, apply_bura_inverse

DENSE_EIG_CAP = 4096


class EigenDecomposition:
    """Orthonormal eigenpairs of a normalized matrix, ascending eigenvalues.

    source 'analytic_laplacian' keeps the eigenvectors implicit (DST-I
    synthesis); 'dense_solver' stores them as columns.
    """

    def __init__(self, eigenvalues: np.ndarray, source: str, vectors: np.ndarray | None = None):
        self.eigenvalues = eigenvalues
        self.source = source
        self._vectors = vectors
        self.n = eigenvalues.shape[0]

    def project(self, v: np.ndarray) -> np.ndarray:
        """Coefficients W^T v."""
        if self.source == "analytic_laplacian":
            return dst(v, type=1, norm="ortho", axis=0)
        return self._vectors.T @ v

    def synthesize(self, c: np.ndarray) -> np.ndarray:
        """Vector W c."""
        if self.source == "analytic_laplacian":
            return dst(c, type=1, norm="ortho", axis=0)
        return self._vectors @ c

    @property
    def eigenvectors(self) -> np.ndarray:
        if self._vectors is None:
            i = np.arange(1, self.n + 1)
            grid = np.outer(i, i) * (np.pi / (self.n + 1))
            self._vectors = np.sqrt(2.0 / (self.n + 1)) * np.sin(grid)
        return self._vectors

    def apply_power(self, p: float, v: np.ndarray) -> np.ndarray:
        """A^p v through the spectral factorization."""
        return self.synthesize(self.eigenvalues[..., None] ** p * self.project(v)
                               if v.ndim == 2 else self.eigenvalues**p * self.project(v))


def decompose(a: NormalizedMatrix, dense_cap: int = DENSE_EIG_CAP) -> EigenDecomposition:
    """Eigendecomposition of a normalized matrix (analytic when available)."""
    if a.analytic_laplacian_n:
        return EigenDecomposition(laplacian_1d_eigenvalues(a.analytic_laplacian_n), "analytic_laplacian")
    if a.n > dense_cap:
        raise DimensionTooLarge(f"dense eigendecomposition capped at n={dense_cap}, got {a.n}")
    w, v = np.linalg.eigh(a.matrix.as_dense())
    return EigenDecomposition(w, "dense_solver", vectors=v)


def exact_frac_apply(a: NormalizedMatrix, alpha: float, f: np.ndarray, dense_cap: int = DENSE_EIG_CAP) -> np.ndarray:
    """u = A^(-alpha) f, exact through the eigendecomposition."""
    return decompose(a, dense_cap).apply_power(-alpha, np.asarray(f, dtype=np.float64))


def energy_norm(a: NormalizedMatrix, gamma: float, v: np.ndarray, dense_cap: int = DENSE_EIG_CAP) -> float:
    """Spectral energy norm sqrt(sum_i lambda_i^gamma (psi_i . v)^2)."""
    eig = decompose(a, dense_cap)
    c = eig.project(np.asarray(v, dtype=np.float64))
    return float(np.sqrt(np.sum(eig.eigenvalues**gamma * c**2)))


@dataclass
class ErrorReport:
    """Energy-norm error of the rational approximation against the oracle."""

    gamma: float
    energy_error: float
    rhs_norm: float
    ratio: float
    bound_E: float
    bound_satisfied: bool


def relative_error_report(
    pf: PartialFractionForm,
    a: NormalizedMatrix,
    alpha: float,
    beta: int,
    f: np.ndarray,
    gamma: float,
    cfg: SolverConfig | None = None,
) -> ErrorReport:
    """Check ||u_r - u||_{A^(gamma+beta)} <= E ||f||_{A^(gamma-beta)}.

    u is the exact spectral solution, u_r the partial-fraction evaluation;
    the bound constant is the certified minimax error carried by pf.
    """
    f = np.asarray(f, dtype=np.float64)
    eig = decompose(a)
    u = eig.apply_power(-alpha, f)
    u_r = apply_bura_inverse(pf, a, f, cfg).u_r
    diff_c = eig.project(u_r - u)
    f_c = eig.project(f)
    energy_error = float(np.sqrt(np.sum(eig.eigenvalues ** (gamma + beta) * diff_c**2)))
    rhs_norm = float(np.sqrt(np.sum(eig.eigenvalues ** (gamma - beta) * f_c**2)))
    ratio = energy_error / rhs_norm if rhs_norm > 0 else 0.0
    bound = pf.minimax_error
    return ErrorReport(
        gamma=gamma,
        energy_error=energy_error,
        rhs_norm=rhs_norm,
        ratio=ratio,
        bound_E=bound,
        bound_satisfied=ratio <= bound * (1.0 + 1e-10),
    )


def error_report_to_dict(report: ErrorReport) -> dict:
    """JSON row for one bound check."""
    return {
        "gamma": report.gamma,
        "energy_error": report.energy_error,
        "rhs_norm": report.rhs_norm,
        "ratio": report.ratio,
        "bound_E": report.bound_E,
        "bound_satisfied": report.bound_satisfied,
    }


def write_error_reports_csv(path, entries) -> None:
    """Batch CSV: one row per (alpha, beta, m, k, N, ErrorReport) entry."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("alpha,beta,m,k,gamma,N,ratio,bound_E,satisfied\n")
        for alpha, beta, m, k, n, rep in entries:
            fh.write(
                f"{float(alpha)!r},{beta},{m},{k},{float(rep.gamma)!r},{n},"
                f"{float(rep.ratio)!r},{float(rep.bound_E)!r},{rep.bound_satisfied}\n"
            )
