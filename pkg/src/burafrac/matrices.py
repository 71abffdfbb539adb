"""Sparse SPD matrix container, M-matrix checks, and spectral normalization.

The library operates on matrices whose spectrum has been scaled into (0, 1].
normalize() produces such a matrix from any SPD input using a certified
upper eigenvalue bound (Gershgorin rows by default, LAPACK bisection for
tridiagonal structure).  laplacian_1d builds the model problem: the
normalized second-difference matrix tridiag(-1/4, 1/2, -1/4) with scale
4/h^2, whose eigenpairs are known in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.io
import scipy.linalg
import scipy.sparse as sp

from .errors import DimensionTooLarge, NotPositiveDefinite, NotSymmetric, Singular

DENSE_CAP = 4096


class SparseSpdMatrix:
    """Symmetric sparse matrix in CSR storage with a structure tag.

    Symmetry is validated exactly on construction.  Positive definiteness is
    certified on demand (Cholesky / Sturm bisection), not assumed.
    """

    def __init__(self, csr: sp.csr_matrix, structure_tag: str = "general"):
        csr = sp.csr_matrix(csr)
        if csr.shape[0] != csr.shape[1]:
            raise ValueError(f"matrix must be square, got shape {csr.shape}")
        if (csr != csr.T).nnz != 0:
            raise NotSymmetric("entries are not exactly symmetric")
        self.csr = csr
        self.n = csr.shape[0]
        self.structure_tag = structure_tag

    @classmethod
    def from_tridiagonal(cls, main, off) -> "SparseSpdMatrix":
        main = np.asarray(main, dtype=np.float64)
        off = np.asarray(off, dtype=np.float64)
        if off.shape[0] != main.shape[0] - 1:
            raise ValueError("off-diagonal must have length n-1")
        csr = sp.diags([off, main, off], [-1, 0, 1], format="csr")
        return cls(csr, structure_tag="tridiagonal")

    @classmethod
    def from_dense(cls, arr) -> "SparseSpdMatrix":
        arr = np.asarray(arr, dtype=np.float64)
        tag = "tridiagonal" if _is_tridiagonal_dense(arr) else "general"
        return cls(sp.csr_matrix(arr), structure_tag=tag)

    def as_dense(self) -> np.ndarray:
        if self.n > DENSE_CAP:
            raise DimensionTooLarge(f"n={self.n} exceeds dense cap {DENSE_CAP}")
        return self.csr.toarray()

    def bands(self):
        """(main, off) diagonals; only valid for tridiagonal structure."""
        if self.structure_tag != "tridiagonal":
            raise ValueError("bands() requires tridiagonal structure")
        return self.csr.diagonal(0), self.csr.diagonal(1)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return self.csr @ x

    def gershgorin_upper(self) -> float:
        """Certified upper bound on the spectrum: max row sum of |entries|."""
        return float(np.max(np.abs(self.csr).sum(axis=1)))

    def max_eigenvalue_tridiagonal(self) -> float:
        main, off = self.bands()
        if self.n == 1:
            return float(main[0])
        return float(
            scipy.linalg.eigvalsh_tridiagonal(main, off, select="i", select_range=(self.n - 1, self.n - 1))[0]
        )

    def is_positive_definite(self) -> bool:
        if self.structure_tag == "tridiagonal":
            main, off = self.bands()
            if self.n == 1:
                return main[0] > 0
            try:
                smallest = scipy.linalg.eigvalsh_tridiagonal(main, off, select="i", select_range=(0, 0))[0]
            except np.linalg.LinAlgError:
                return False
            return bool(smallest > 0)
        dense = self.as_dense()
        try:
            np.linalg.cholesky(dense)
            return True
        except np.linalg.LinAlgError:
            return False

    def scaled(self, factor: float) -> "SparseSpdMatrix":
        return SparseSpdMatrix(self.csr * factor, structure_tag=self.structure_tag)


def _is_tridiagonal_dense(arr: np.ndarray) -> bool:
    n = arr.shape[0]
    if n <= 2:
        return True
    mask = np.abs(np.subtract.outer(np.arange(n), np.arange(n))) > 1
    return not np.any(arr[mask])


@dataclass
class NormalizedMatrix:
    """SPD matrix with spectrum in (0, 1] plus the scale that undoes it."""

    matrix: SparseSpdMatrix
    scale: float
    spectral_bound_proof: str  # gershgorin | exact_eigen | user_asserted
    analytic_laplacian_n: int | None = None

    @property
    def n(self) -> int:
        return self.matrix.n

    def original(self) -> SparseSpdMatrix:
        return self.matrix.scaled(self.scale)


def laplacian_1d(n: int) -> NormalizedMatrix:
    """Normalized 1D Dirichlet Laplacian on a uniform grid with n interior nodes.

    Returns tridiag(-1/4, 1/2, -1/4) with scale 4/h^2, h = 1/(n+1).  The
    eigenpairs are known in closed form (sine vectors), which the spectral
    oracle exploits.
    """
    if n < 1:
        raise ValueError(f"need at least one interior node, got n={n}")
    h = 1.0 / (n + 1)
    mat = SparseSpdMatrix.from_tridiagonal(np.full(n, 0.5), np.full(n - 1, -0.25))
    return NormalizedMatrix(
        matrix=mat,
        scale=4.0 / h**2,
        spectral_bound_proof="exact_eigen",
        analytic_laplacian_n=n,
    )


def laplacian_1d_eigenvalues(n: int) -> np.ndarray:
    """Closed-form spectrum sin^2(i*pi/(2(n+1))), i = 1..n, ascending."""
    i = np.arange(1, n + 1)
    return np.sin(i * np.pi / (2.0 * (n + 1))) ** 2


def _as_dense_any(a) -> np.ndarray:
    if isinstance(a, SparseSpdMatrix):
        return a.as_dense()
    if sp.issparse(a):
        return a.toarray()
    return np.asarray(a, dtype=np.float64)


def is_z_matrix(a) -> bool:
    """Off-diagonal entries all <= 0 (exact sign inspection)."""
    dense = _as_dense_any(a)
    off = dense - np.diag(np.diag(dense))
    return bool(np.all(off <= 0.0))


def is_m_matrix(a) -> bool:
    """Z-matrix with positive real eigenvalues.

    The non-Z case is decided by sign inspection alone.  The symmetric
    (Stieltjes) case is certified through positive definiteness; asymmetric
    Z-matrices are rejected because this library only certifies the
    symmetric path.
    """
    dense = _as_dense_any(a)
    if not is_z_matrix(dense):
        return False
    if not np.array_equal(dense, dense.T):
        raise NotSymmetric("M-matrix certification implemented for symmetric matrices only")
    if isinstance(a, SparseSpdMatrix):
        return a.is_positive_definite()
    return SparseSpdMatrix.from_dense(dense).is_positive_definite()


def is_monotone_dense(a, cap: int = 2000) -> bool:
    """Monotone iff the inverse is entrywise nonnegative (dense check)."""
    dense = _as_dense_any(a)
    n = dense.shape[0]
    if n > cap:
        raise DimensionTooLarge(f"monotonicity check capped at n={cap}, got {n}")
    try:
        inv = np.linalg.inv(dense)
    except np.linalg.LinAlgError as exc:
        raise Singular("matrix is singular; monotonicity undefined") from exc
    return bool(np.min(inv) >= -1e-13 * np.max(np.abs(inv)))


def normalize(a: SparseSpdMatrix, method: str = "gershgorin") -> NormalizedMatrix:
    """Scale an SPD matrix so its spectrum lies in (0, 1].

    method 'gershgorin' uses the row-sum bound (cheap, certified); 'exact'
    uses the largest eigenvalue, available for tridiagonal structure.
    Positive scaling preserves the Z-pattern and definiteness, so M-matrix
    structure survives normalization.
    """
    if not a.is_positive_definite():
        raise NotPositiveDefinite("normalize() requires a positive definite matrix")
    if method == "exact":
        if a.structure_tag != "tridiagonal":
            raise ValueError("exact normalization bound implemented for tridiagonal matrices")
        scale = a.max_eigenvalue_tridiagonal()
        proof = "exact_eigen"
    elif method == "gershgorin":
        scale = a.gershgorin_upper()
        proof = "gershgorin"
    else:
        raise ValueError(f"unknown normalization method {method!r}")
    if scale <= 0:
        raise NotPositiveDefinite("spectral bound is nonpositive")
    # divide entry data directly: one rounding here, one in original(), so a
    # normalize/rescale round trip moves each entry by at most one rounding
    # step per operation
    csr = a.csr.copy()
    csr.data = csr.data / scale
    return NormalizedMatrix(
        matrix=SparseSpdMatrix(csr, structure_tag=a.structure_tag), scale=scale, spectral_bound_proof=proof
    )


def load_matrix_market(path) -> SparseSpdMatrix:
    """Read a Matrix Market coordinate file; must be (numerically) symmetric.

    Files declared symmetric in the header are expanded by the reader;
    general files are accepted only when their entries are exactly symmetric.
    """
    mat = scipy.io.mmread(path)
    csr = sp.csr_matrix(mat)
    if (csr != csr.T).nnz != 0:
        raise NotSymmetric(f"{path} is not symmetric")
    return SparseSpdMatrix(csr, structure_tag=_band_tag(csr))


def _band_tag(csr: sp.csr_matrix) -> str:
    coo = csr.tocoo()
    return "tridiagonal" if np.all(np.abs(coo.row - coo.col) <= 1) else "general"


def write_dense_csv(path, arr: np.ndarray) -> None:
    """Dump a dense matrix (e.g. an inverse under test) as CSV rows."""
    arr = np.atleast_2d(np.asarray(arr, dtype=np.float64))
    with open(path, "w", encoding="utf-8") as fh:
        for row in arr:
            fh.write(",".join(repr(float(x)) for x in row))
            fh.write("\n")
