"""Partial fraction decomposition of t^(-beta) * r(t).

For a rational approximant r = p/q with simple real poles d_1..d_k the
decomposition reads

    t^(-beta) r(t) = sum_j b_j t^j  +  sum_l c0_l / t^l  +  sum_j c_j / (t - d_j)

with c_j = cstar_j / d_j^beta, where cstar_j are the residues of r itself.
Evaluating it against a normalized matrix turns the fractional solve into
beta plain solves plus k shifted solves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ComplexPoles, RepeatedPoles
from .remez import BuraParams, RationalApprox, context_for, hp_coefficients, mp_polyval


@dataclass
class PartialFractionForm:
    """Double-precision coefficients of the decomposition.

    poly_part holds b_j (empty when m < k + beta), inverse_part holds
    c0_1..c0_beta, residues/poles hold c_j and d_j.  residues_raw keeps the
    residues cstar_j of r itself, related by c_j d_j^beta = cstar_j.  The *_hp companions are full-precision strings for
    verification; rounding_error reports the relative accuracy lost when the
    extended-precision decomposition is rounded to double.
    """

    params: BuraParams
    poly_part: np.ndarray
    inverse_part: np.ndarray
    residues: np.ndarray
    poles: np.ndarray
    residues_raw: np.ndarray
    minimax_error: float = 0.0
    precision_bits: int = 0
    poles_hp: tuple = field(repr=False, default=())
    residues_hp: tuple = field(repr=False, default=())
    inverse_hp: tuple = field(repr=False, default=())
    poly_hp: tuple = field(repr=False, default=())
    rounding_error: float = 0.0


def _companion_roots(ctx, coeffs):
    """Roots of sum_j coeffs[j] t^j: companion-matrix eigenvalues polished by
    Newton iteration at working precision."""
    k = len(coeffs) - 1
    if k == 0:
        return []
    if k == 1:
        return [ctx.mpc(-coeffs[0] / coeffs[1])]
    lead = coeffs[-1]
    monic = [c / lead for c in coeffs[:-1]]
    comp = ctx.matrix(k, k)
    for i in range(1, k):
        comp[i, i - 1] = ctx.mpf(1)
    for i in range(k):
        comp[i, k - 1] = -monic[i]
    eigs = ctx.eig(comp, left=False, right=False)
    dcoeffs = [j * coeffs[j] for j in range(1, k + 1)]
    roots = []
    for z in eigs:
        z = ctx.mpc(z)
        for _ in range(80):
            step = _mp_polyval_c(ctx, coeffs, z) / _mp_polyval_c(ctx, dcoeffs, z)
            z = z - step
            if abs(step) <= ctx.mpf(2) ** (-ctx.prec + 8) * max(abs(z), ctx.mpf(1e-300)):
                break
        roots.append(z)
    return roots


def _mp_polyval_c(ctx, coeffs, z):
    acc = ctx.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _realify(ctx, roots, what):
    tol = ctx.mpf(2) ** (-ctx.prec // 2)
    out = []
    for z in roots:
        if abs(z.imag) > tol * max(abs(z.real), ctx.mpf(1)):
            raise ComplexPoles(f"{what} has a complex root {complex(z)}; real partial fractions do not apply")
        out.append(z.real)
    return out


def rational_poles(r: RationalApprox, ctx=None):
    """Denominator roots in extended precision, descending (closest to 0 first)."""
    ctx = ctx or context_for(r)
    _, den = hp_coefficients(ctx, r)
    roots = _realify(ctx, _companion_roots(ctx, den), "denominator")
    roots.sort(reverse=True)
    return ctx, roots


def rational_zeros(r: RationalApprox, ctx=None):
    """Numerator roots in extended precision, descending."""
    ctx = ctx or context_for(r)
    num, _ = hp_coefficients(ctx, r)
    roots = _realify(ctx, _companion_roots(ctx, num), "numerator")
    roots.sort(reverse=True)
    return ctx, roots


def _synthetic_division(ctx, num, den):
    """Quotient of num/den (monomial coefficients, ascending); deg num >= deg den."""
    m = len(num) - 1
    k = len(den) - 1
    rem = list(num)
    quot = [ctx.mpf(0)] * (m - k + 1)
    for j in range(m - k, -1, -1):
        c = rem[k + j] / den[k]
        quot[j] = c
        for i in range(k + 1):
            rem[i + j] -= c * den[i]
    return quot


def partial_fractions(r: RationalApprox) -> PartialFractionForm:
    """Decompose t^(-beta) r(t) into polynomial, 1/t^l and simple-pole terms.

    Poles are extracted from the companion matrix of the denominator at the
    approximation's working precision and polished by Newton; complex or
    repeated roots are surfaced as errors, never dropped.
    """
    params = r.params
    beta, m, k = params.beta, params.m, params.k
    ctx = context_for(r)
    num, den = hp_coefficients(ctx, r)
    poles = _realify(ctx, _companion_roots(ctx, den), "denominator")
    poles.sort(reverse=True)
    if k >= 2:
        gaps = [abs(poles[i] - poles[i + 1]) for i in range(k - 1)]
        scale = max(abs(p) for p in poles)
        if min(gaps) <= ctx.mpf(2) ** (-ctx.prec // 2) * scale:
            raise RepeatedPoles("denominator has numerically repeated roots")

    dden = [j * den[j] for j in range(1, k + 1)]
    cstar = [mp_polyval(ctx, num, d) / mp_polyval(ctx, dden, d) for d in poles]
    cj = [cs / d**beta for cs, d in zip(cstar, poles)]

    if m >= k:
        quot = _synthetic_division(ctx, num, den)
    else:
        quot = []
    # s_i t^(i-beta): i >= beta feeds the polynomial part, i < beta the 1/t^l part
    poly = [quot[j + beta] for j in range(0, m - k - beta + 1)] if m - k - beta >= 0 else []
    c0 = []
    for ell in range(1, beta + 1):
        s_term = quot[beta - ell] if 0 <= beta - ell < len(quot) else ctx.mpf(0)
        c0.append(s_term - sum(cs * d ** (ell - beta - 1) for cs, d in zip(cstar, poles)))

    form = PartialFractionForm(
        params=params,
        poly_part=np.array([float(x) for x in poly], dtype=np.float64),
        inverse_part=np.array([float(x) for x in c0], dtype=np.float64),
        residues=np.array([float(x) for x in cj], dtype=np.float64),
        poles=np.array([float(x) for x in poles], dtype=np.float64),
        residues_raw=np.array([float(x) for x in cstar], dtype=np.float64),
        minimax_error=r.minimax_error,
        precision_bits=r.precision_bits,
        poles_hp=tuple(ctx.nstr(x, ctx.dps + 4) for x in poles),
        residues_hp=tuple(ctx.nstr(x, ctx.dps + 4) for x in cj),
        inverse_hp=tuple(ctx.nstr(x, ctx.dps + 4) for x in c0),
        poly_hp=tuple(ctx.nstr(x, ctx.dps + 4) for x in poly),
    )
    form.rounding_error = _double_rounding_error(ctx, r, form)
    return form


def evaluate_form_hp(ctx, form: PartialFractionForm, t):
    """Extended-precision evaluation of the decomposition at t > 0."""
    beta = form.params.beta
    poles = [ctx.mpf(s) for s in form.poles_hp]
    cj = [ctx.mpf(s) for s in form.residues_hp]
    c0 = [ctx.mpf(s) for s in form.inverse_hp]
    poly = [ctx.mpf(s) for s in form.poly_hp]
    acc = mp_polyval(ctx, poly, t) if poly else ctx.mpf(0)
    for ell in range(1, beta + 1):
        acc += c0[ell - 1] / t**ell
    for c, d in zip(cj, poles):
        acc += c / (t - d)
    return acc


def evaluate_form(form: PartialFractionForm, t) -> np.ndarray | float:
    """Double-precision evaluation of the decomposition (t > 0, scalar or array)."""
    tt = np.asarray(t, dtype=np.float64)
    beta = form.params.beta
    acc = np.zeros_like(tt)
    for b in form.poly_part[::-1]:
        acc = acc * tt + b
    for ell in range(1, beta + 1):
        acc = acc + form.inverse_part[ell - 1] / tt**ell
    for c, d in zip(form.residues, form.poles):
        acc = acc + c / (tt - d)
    return float(acc) if np.isscalar(t) or acc.ndim == 0 else acc


def _double_rounding_error(ctx, r: RationalApprox, form: PartialFractionForm) -> float:
    """Worst relative gap between the double-rounded decomposition and the
    extended-precision one on a small sample grid."""
    worst = 0.0
    for x in (1e-8, 1e-4, 1e-2, 0.1, 0.5, 1.0):
        t = ctx.mpf(x)
        exact = evaluate_form_hp(ctx, form, t)
        approx = evaluate_form(form, x)
        if exact != 0:
            worst = max(worst, abs(float((ctx.mpf(approx) - exact) / exact)))
    return worst
