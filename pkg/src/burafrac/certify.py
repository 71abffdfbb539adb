"""Certificates for computed approximants: equioscillation and positivity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import WrongExtremaCount
from .fractions import PartialFractionForm, rational_poles, rational_zeros
from .remez import (
    BuraParams,
    RationalApprox,
    _cluster_floor,
    context_for,
    find_error_extrema,
    hp_coefficients,
)


@dataclass
class ExtremaReport:
    """Alternation points of the error curve with their signed deviations."""

    points: np.ndarray
    deviations: np.ndarray
    alternation_ok: bool
    relative_spread: float


@dataclass
class PositivityCertificate:
    """Machine-checkable witness of the sign hypotheses for positivity.

    certified is the conjunction of the four flags; it implies that the
    approximate inverse built from the decomposition maps nonnegative data
    to nonnegative results on normalized SPD M-matrices.
    """

    d_negative: bool
    residues_positive: bool
    c0_positive: bool
    degree_ok: bool
    certified: bool


def verify_equioscillation(r: RationalApprox, rel_tol: float = 1e-6) -> ExtremaReport:
    """Locate all alternation points of t^(beta-alpha) - r(t) on [0, 1].

    The scan is logarithmic near 0 (where the extrema cluster) plus linear,
    refined in extended precision.  For the diagonal beta=1 family the count
    must be exactly m + k + 2; a mismatch signals a defective exchange
    solution and raises WrongExtremaCount.
    """
    params = r.params
    ctx = context_for(r)
    num, den = hp_coefficients(ctx, r)
    exponent = ctx.mpf(params.beta) - ctx.mpf(params.alpha)
    # the innermost alternation point sits near the geometric cluster scale,
    # which collapses rapidly as beta - alpha -> 0
    t_floor = max(min(1e-18, _cluster_floor(params) / 100.0), 1e-280)
    extrema = find_error_extrema(ctx, num, den, exponent, t_floor=t_floor)
    # drop points whose deviation is negligible next to the minimax error:
    # endpoints are genuine extrema of the restricted error only if they
    # carry full deviation
    keep = [(t, v) for t, v in extrema if abs(v) >= 0.5 * r.minimax_error]
    expected = params.n_reference
    if params.beta == 1 and params.m == params.k and len(keep) != expected:
        raise WrongExtremaCount(
            f"found {len(keep)} alternation points, expected {expected} "
            f"for (k, k, beta=1) with k={params.k}"
        )
    pts = np.array([float(t) for t, _ in keep])
    devs = np.array([float(v) for _, v in keep])
    signs_alternate = bool(np.all(devs[1:] * devs[:-1] < 0))
    mags = np.abs(devs)
    spread = float((mags.max() - mags.min()) / mags.max())
    uniform = bool(np.all(np.abs(mags - r.minimax_error) <= rel_tol * r.minimax_error))
    return ExtremaReport(
        points=pts,
        deviations=devs,
        alternation_ok=signs_alternate and uniform,
        relative_spread=spread,
    )


def check_positivity_conditions(
    pf: PartialFractionForm, params: BuraParams | None = None, rel_tol: float = 1e-12
) -> PositivityCertificate:
    """Evaluate the sign hypotheses (poles negative, residues and c0
    nonnegative, m < k + beta) with tolerance relative to the largest
    coefficient magnitude.  Fails loudly rather than clamping signs."""
    params = params or pf.params
    pools = np.concatenate([pf.poles, pf.residues, pf.inverse_part, pf.poly_part, [1.0]])
    scale = float(np.max(np.abs(pools)))
    tol = rel_tol * scale
    d_negative = bool(pf.poles.size == 0 or np.all(pf.poles < tol))
    residues_positive = bool(pf.residues.size == 0 or np.all(pf.residues > -tol))
    c0_positive = bool(pf.inverse_part.size == 0 or np.all(pf.inverse_part > -tol))
    degree_ok = params.degree_ok
    return PositivityCertificate(
        d_negative=d_negative,
        residues_positive=residues_positive,
        c0_positive=c0_positive,
        degree_ok=degree_ok,
        certified=d_negative and residues_positive and c0_positive and degree_ok,
    )


def verify_interlacing(r: RationalApprox) -> bool:
    """Zeros and poles on the negative axis interlace:
    0 > zeta_1 > d_1 > zeta_2 > ... > zeta_k > d_k."""
    ctx, zeros = rational_zeros(r)
    _, poles = rational_poles(r, ctx)
    if len(zeros) != len(poles):
        return False
    if any(z >= 0 for z in zeros) or any(d >= 0 for d in poles):
        return False
    k = len(poles)
    for i in range(k):
        if not zeros[i] > poles[i]:
            return False
        if i + 1 < k and not poles[i] > zeros[i + 1]:
            return False
    return True
