"""burafrac: positive rational approximation of fractional matrix inverses.

Solves A^alpha u = f (0 < alpha < 1) for normalized SPD M-matrices by the
best uniform rational approximation of t^(beta-alpha) on [0, 1], decomposed
into partial fractions and evaluated as a handful of shifted sparse solves.
The approximation carries certificates: equioscillation of the minimax
error, sign structure of poles and residues (which guarantees an entrywise
nonnegative solution operator), and energy-norm error bounds verified
against an exact spectral oracle.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .certify import (
    ExtremaReport,
    PositivityCertificate,
    check_positivity_conditions,
    verify_equioscillation,
    verify_interlacing,
)
from .coeff_io import (
    coefficients_from_dict,
    coefficients_to_dict,
    load_coefficients,
    save_coefficients,
)
from .errors import (
    BurafracError,
    CgDivergence,
    ComplexPoles,
    DimensionTooLarge,
    NonConvergence,
    NotPositiveDefinite,
    NotSymmetric,
    PoleHit,
    PrecisionExhausted,
    RepeatedPoles,
    ShiftNotSpd,
    Singular,
    WrongExtremaCount,
)
from .experiments import (
    ExperimentConfig,
    fit_loglog_slope,
    get_approximation,
    run_figures,
    run_table1,
    run_table2,
)
from .fractions import PartialFractionForm, evaluate_form, partial_fractions
from .matrices import (
    NormalizedMatrix,
    SparseSpdMatrix,
    is_m_matrix,
    is_monotone_dense,
    is_z_matrix,
    laplacian_1d,
    laplacian_1d_eigenvalues,
    load_matrix_market,
    normalize,
    write_dense_csv,
)
from .oracle import (
    EigenDecomposition,
    ErrorReport,
    decompose,
    energy_norm,
    error_report_to_dict,
    exact_frac_apply,
    relative_error_report,
    write_error_reports_csv,
)
from .remez import (
    BuraParams,
    RationalApprox,
    RemezOptions,
    bura_compute,
    evaluate_rational,
    stahl_bound,
)
from .rhs import RhsSpec, build_rhs, grid_nodes, irwin_hall4
from .solver import (
    SolveReport,
    SolverConfig,
    apply_bura_inverse,
    shifted_solve,
    verify_doubly_nonnegative,
)

__version__ = "0.1.0"
