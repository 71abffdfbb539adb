"""Best uniform rational approximation of t^(beta-alpha) on [0, 1].

The minimax approximant r in R(m, k) is computed by a Remez exchange
iteration carried out in extended precision (mpmath).  Working in the
monomial basis is safe here because the linear algebra happens at >= 128
significand bits, and the converged numerator/denominator of the certified
family have all-positive coefficients, so double-precision evaluation on
[0, 1] is cancellation-free.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np
from mpmath.ctx_mp import MPContext

from .errors import NonConvergence, PoleHit, PrecisionExhausted

DEFAULT_PRECISION_BITS = 320
PRECISION_ENV_VAR = "BURA_PRECISION_BITS"


def default_precision_bits() -> int:
    """Remez working precision: BURA_PRECISION_BITS overrides the default."""
    raw = os.environ.get(PRECISION_ENV_VAR)
    if raw is None:
        return DEFAULT_PRECISION_BITS
    bits = int(raw)
    if bits < 64:
        raise ValueError(f"{PRECISION_ENV_VAR} must be >= 64, got {bits}")
    return bits


@dataclass(frozen=True)
class BuraParams:
    """Degrees and exponents of one approximation job.

    The target function is t^(beta-alpha) on [0, 1]; the approximant lives
    in R(m, k).  Positivity certification additionally requires m < k + beta.
    """

    alpha: float
    beta: int = 1
    m: int = -1  # -1 means "same as k"
    k: int = 5

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.beta < 1:
            raise ValueError(f"beta must be a positive integer, got {self.beta}")
        if self.m == -1:
            object.__setattr__(self, "m", self.k)
        if self.m < 0 or self.k < 0:
            raise ValueError(f"degrees must be nonnegative, got m={self.m} k={self.k}")

    @property
    def n_reference(self) -> int:
        """Number of equioscillation points of the best approximation."""
        return self.m + self.k + 2

    @property
    def degree_ok(self) -> bool:
        """Degree hypothesis m < k + beta of the positivity conditions."""
        return self.m < self.k + self.beta

    @property
    def exponent(self) -> float:
        return self.beta - self.alpha


@dataclass
class RemezOptions:
    precision_bits: int = 0  # 0 resolves to env/default
    max_iterations: int = 100
    # one iteration stricter than the 1e-8 leveling contract so downstream
    # coefficient identities (|c0_1 - E| ~ spread * E) keep real margin
    equioscillation_tol: float = 1e-9
    scan_points: int = 4000
    certify_samples: int = 1_200_000

    def resolved_precision(self, params: "BuraParams | None" = None) -> int:
        """Explicit bits win, then the env override; the built-in default is
        raised when the conditioning estimate for (m, k) demands more."""
        if self.precision_bits > 0:
            return self.precision_bits
        if os.environ.get(PRECISION_ENV_VAR) is not None:
            return default_precision_bits()
        bits = DEFAULT_PRECISION_BITS
        if params is not None:
            bits = max(bits, _precision_estimate(params))
        return bits


@dataclass
class RationalApprox:
    """A computed minimax rational approximation with its certificate data.

    numerator/denominator are monomial coefficients (ascending powers) in
    float64; the *_hp fields keep full-precision decimal strings so that
    pole extraction and equioscillation verification can rerun in extended
    precision.
    """

    params: BuraParams
    numerator: np.ndarray
    denominator: np.ndarray
    minimax_error: float
    precision_bits: int
    numerator_hp: tuple = field(repr=False, default=())
    denominator_hp: tuple = field(repr=False, default=())
    certified_max_error: float = 0.0
    iterations: int = 0
    final_spread: float = 0.0


# ---------------------------------------------------------------------------
# extended-precision helpers shared with fractions.py / certify.py


def make_context(prec_bits: int) -> MPContext:
    """Fresh mpmath context (independent of the global one, thread-safe)."""
    ctx = MPContext()
    ctx.prec = prec_bits
    return ctx


def context_for(r: RationalApprox, extra_bits: int = 0) -> MPContext:
    return make_context(r.precision_bits + extra_bits)


def hp_coefficients(ctx, r: RationalApprox):
    """Rebuild (numerator, denominator) as mpf lists from the stored strings."""
    num = [ctx.mpf(s) for s in r.numerator_hp]
    den = [ctx.mpf(s) for s in r.denominator_hp]
    return num, den


def mp_polyval(ctx, coeffs, t):
    acc = ctx.mpf(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def mp_target(ctx, t, exponent):
    """t^(beta-alpha), exactly 0 at t = 0 (the exponent is positive)."""
    if t == 0:
        return ctx.mpf(0)
    return t ** exponent


def mp_error(ctx, num, den, exponent, t):
    return mp_target(ctx, t, exponent) - mp_polyval(ctx, num, t) / mp_polyval(ctx, den, t)


def mp_error_deriv(ctx, num, den, exponent, t):
    p = mp_polyval(ctx, num, t)
    q = mp_polyval(ctx, den, t)
    dp = mp_polyval(ctx, [j * num[j] for j in range(1, len(num))], t)
    dq = mp_polyval(ctx, [j * den[j] for j in range(1, len(den))], t)
    fp = exponent * t ** (exponent - 1) if t > 0 else ctx.inf
    return fp - (dp * q - p * dq) / (q * q)


# ---------------------------------------------------------------------------
# Remez internals


def stahl_bound(alpha: float, k: int) -> float:
    """Asymptotic error bound 4^(2-alpha)|sin(pi(1-alpha))|exp(-2pi sqrt((1-alpha)k)).

    Upper envelope (low-order term dropped) for the minimax error of the
    diagonal (k, k) approximation of t^(1-alpha); every certified computed
    error is checked against it.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    om = 1.0 - alpha
    return 4.0 ** (2.0 - alpha) * abs(math.sin(math.pi * om)) * math.exp(-2.0 * math.pi * math.sqrt(om * k))


def _error_scale_estimate(alpha: float, beta: int, k: int) -> float:
    # Stahl scale reused as a heuristic for beta > 1 starts
    if k < 1:
        return 0.25
    return stahl_bound(alpha, k)


def _cluster_floor(params: BuraParams) -> float:
    """Scale of the innermost alternation point (geometric clustering)."""
    e_est = _error_scale_estimate(params.alpha, params.beta, params.k)
    return min((2.0 * e_est) ** (1.0 / (params.beta - params.alpha)) / 4.0, 1e-2)


def _precision_estimate(params: BuraParams) -> int:
    # the leveled system's conditioning grows like t_min^-m for reference
    # points spanning [t_min, 1] in the monomial basis
    t_min = _cluster_floor(params)
    return int(math.ceil(params.m * math.log2(1.0 / t_min))) + 64


def _initial_reference(ctx, params: BuraParams):
    """Chebyshev-Lobatto points in log(t), floored near the expected innermost
    alternation point (the extrema cluster geometrically toward 0)."""
    n = params.n_reference
    t_min = _cluster_floor(params)
    pts = [ctx.mpf(0)]
    log_min = ctx.log(ctx.mpf(t_min))
    for j in range(1, n - 1):
        u = (1 - ctx.cos(ctx.pi * j / (n - 1))) / 2
        pts.append(ctx.exp(log_min * (1 - u)))
    pts.append(ctx.mpf(1))
    return pts


def _solve_leveled(ctx, ref, params: BuraParams, exponent, qstart=None):
    """Linearized equioscillation solve on the current reference.

    Unknowns are the numerator coefficients a_0..a_m, the denominator
    coefficients b_1..b_k (b_0 = 1 fixed) and the leveled deviation lam;
    the lam*q product is relinearized until the leveling residual
    max_i |e(x_i) - s_i*lam| drops below 1e-12*|lam|.
    """
    m, k = params.m, params.k
    n = params.n_reference
    fv = [mp_target(ctx, t, exponent) for t in ref]
    signs = [(-1) ** (i + 1) for i in range(n)]
    if qstart is not None:
        qprev = [mp_polyval(ctx, qstart, t) for t in ref]
    else:
        qprev = [ctx.mpf(1)] * n
    inner_tol = ctx.mpf(10) ** -12
    num = den = lam = None
    for _ in range(40):
        mat = ctx.matrix(n, n)
        rhs = ctx.matrix(n, 1)
        for i, t in enumerate(ref):
            pw = ctx.mpf(1)
            for j in range(m + 1):
                mat[i, j] = pw
                pw *= t
            pw = t
            for j in range(1, k + 1):
                mat[i, m + j] = -fv[i] * pw
                pw *= t
            mat[i, m + k + 1] = signs[i] * qprev[i]
            rhs[i] = fv[i]
        try:
            sol = ctx.lu_solve(mat, rhs)
        except ZeroDivisionError as exc:
            raise PrecisionExhausted(
                f"leveled Remez system is singular at {ctx.prec} bits for "
                f"(alpha={params.alpha}, beta={params.beta}, m={m}, k={k}); "
                "increase precision_bits"
            ) from exc
        num = [sol[j] for j in range(m + 1)]
        den = [ctx.mpf(1)] + [sol[m + j] for j in range(1, k + 1)]
        lam = sol[m + k + 1]
        if lam == 0:
            raise PrecisionExhausted("leveled deviation collapsed to zero")
        qnew = [mp_polyval(ctx, den, t) for t in ref]
        if any(q <= 0 for q in qnew):
            # denominator lost positivity on the reference: unusable iterate
            raise NonConvergence("denominator became nonpositive on the reference")
        mislevel = max(
            abs(fv[i] - mp_polyval(ctx, num, ref[i]) / qnew[i] - signs[i] * lam) for i in range(n)
        )
        qprev = qnew
        if mislevel <= inner_tol * abs(lam):
            break
    return num, den, lam


def _double_coeffs(coeffs) -> np.ndarray:
    return np.array([float(c) for c in coeffs], dtype=np.float64)


def _scan_error_longdouble(num, den, exponent, grid):
    """Vectorized error evaluation on a grid (longdouble Horner)."""
    nl = np.asarray(num, dtype=np.longdouble)
    dl = np.asarray(den, dtype=np.longdouble)
    g = np.asarray(grid, dtype=np.longdouble)
    fx = np.zeros_like(g)
    pos = g > 0
    fx[pos] = g[pos] ** np.longdouble(exponent)
    pv = np.zeros_like(g)
    qv = np.zeros_like(g)
    for c in nl[::-1]:
        pv = pv * g + c
    for c in dl[::-1]:
        qv = qv * g + c
    return fx - pv / qv


def _refine_extremum(ctx, num, den, exponent, lo, hi):
    """Root of e'(t) inside [lo, hi]: bisection bracket, then secant polish."""
    dlo = mp_error_deriv(ctx, num, den, exponent, lo)
    dhi = mp_error_deriv(ctx, num, den, exponent, hi)
    if dlo * dhi > 0:
        return (lo + hi) / 2
    for _ in range(30):
        mid = (lo + hi) / 2
        dm = mp_error_deriv(ctx, num, den, exponent, mid)
        if dm == 0:
            return mid
        if dm * dlo < 0:
            hi, dhi = mid, dm
        else:
            lo, dlo = mid, dm
    x0, f0, x1, f1 = lo, dlo, hi, dhi
    for _ in range(6):
        if f1 == f0:
            break
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        if not lo <= x2 <= hi:
            break
        x0, f0, x1, f1 = x1, f1, x2, mp_error_deriv(ctx, num, den, exponent, x2)
    return x1


def _locate_extrema(ctx, num, den, exponent, t_floor, scan_points):
    """All local extrema of the error on [0, 1].

    A longdouble scan on a log+linear grid brackets the interior critical
    points (the clustered region near 0 needs the log part); each bracket is
    then refined in extended precision.  The endpoints are always candidates.
    """
    grid = np.unique(
        np.concatenate(
            [
                np.geomspace(t_floor, 1.0, scan_points),
                np.linspace(0.0, 1.0, scan_points)[1:],
            ]
        )
    )
    e = _scan_error_longdouble(_double_coeffs(num), _double_coeffs(den), float(exponent), grid)
    de = np.diff(e)
    out = [(ctx.mpf(0), mp_error(ctx, num, den, exponent, ctx.mpf(0)))]
    for i in range(len(de) - 1):
        rising = de[i] > 0 and de[i + 1] <= 0
        falling = de[i] < 0 and de[i + 1] >= 0
        if not (rising or falling):
            continue
        lo = ctx.mpf(float(grid[i]))
        hi = ctx.mpf(float(grid[i + 2]))
        t = _refine_extremum(ctx, num, den, exponent, lo, hi)
        out.append((t, mp_error(ctx, num, den, exponent, t)))
    one = ctx.mpf(1)
    out.append((one, mp_error(ctx, num, den, exponent, one)))
    out.sort(key=lambda z: z[0])
    dedup = []
    for t, v in out:
        if dedup and t - dedup[-1][0] < ctx.mpf("1e-30") * max(t, ctx.mpf("1e-300")):
            continue
        dedup.append((t, v))
    return dedup


def _select_alternating(extrema, n):
    """Keep n sign-alternating extrema, preserving the largest deviations."""
    seq = []
    for t, v in extrema:
        if seq and (v >= 0) == (seq[-1][1] >= 0):
            if abs(v) > abs(seq[-1][1]):
                seq[-1] = (t, v)
        else:
            seq.append((t, v))
    while len(seq) > n:
        if abs(seq[0][1]) < abs(seq[-1][1]):
            seq.pop(0)
        else:
            seq.pop()
    return seq


def find_error_extrema(ctx, num, den, exponent, scan_points=4000, t_floor=None):
    """Public entry used by the equioscillation verifier as well."""
    if t_floor is None:
        t_floor = 1e-16
    return _locate_extrema(ctx, num, den, exponent, t_floor, scan_points)


def bura_compute(params: BuraParams, opts: RemezOptions | None = None) -> RationalApprox:
    """Compute the best uniform rational approximation of t^(beta-alpha) on [0, 1].

    Runs the exchange iteration with all-extrema replacement until the
    deviations at the located extrema are leveled to ``equioscillation_tol``
    (relative spread), then certifies the reported error by a dense
    log+linear sampling of the error curve.

    Raises
    ------
    NonConvergence
        The exchange stalled; the exception carries the last spread.
    PrecisionExhausted
        The leveled system is singular at the working precision.
    """
    opts = opts or RemezOptions()
    prec = opts.resolved_precision(params)
    ctx = make_context(prec)
    exponent = ctx.mpf(params.beta) - ctx.mpf(params.alpha)
    ref = _initial_reference(ctx, params)
    n = params.n_reference
    qstart = None
    spread = math.inf
    for iteration in range(opts.max_iterations):
        num, den, lam = _solve_leveled(ctx, ref, params, exponent, qstart)
        qstart = den
        t_floor = max(float(ref[1]) / 50.0, 1e-300)
        scan = opts.scan_points
        for attempt in range(3):
            extrema = _locate_extrema(ctx, num, den, exponent, t_floor, scan)
            selected = _select_alternating(extrema, n)
            if len(selected) >= n:
                break
            scan *= 4
            t_floor *= 1e-3
        if len(selected) < n:
            raise NonConvergence(
                f"found only {len(selected)} alternation points, expected {n}",
                last_spread=spread,
            )
        devs = [abs(v) for _, v in selected]
        dmax, dmin = max(devs), min(devs)
        spread = float((dmax - dmin) / dmax)
        ref = [t for t, _ in selected]
        if spread < opts.equioscillation_tol:
            return _package_result(ctx, params, num, den, dmax, prec, iteration + 1, spread, opts)
    raise NonConvergence(
        f"no equioscillation after {opts.max_iterations} iterations "
        f"(relative deviation spread {spread:.3e})",
        last_spread=spread,
    )


def _package_result(ctx, params, num, den, dev, prec, iterations, spread, opts):
    e_rep = float(dev)
    approx = RationalApprox(
        params=params,
        numerator=_double_coeffs(num),
        denominator=_double_coeffs(den),
        minimax_error=e_rep,
        precision_bits=prec,
        numerator_hp=tuple(ctx.nstr(c, prec // 3, strip_zeros=False) for c in num),
        denominator_hp=tuple(ctx.nstr(c, prec // 3, strip_zeros=False) for c in den),
        iterations=iterations,
        final_spread=spread,
    )
    approx.certified_max_error = certified_sup_error(approx, samples=opts.certify_samples)
    if approx.certified_max_error > e_rep * (1.0 + 1e-3):
        raise NonConvergence(
            f"dense certification found deviation {approx.certified_max_error:.6e} "
            f"above the reported minimax error {e_rep:.6e}",
            last_spread=spread,
        )
    return approx


def certified_sup_error(r: RationalApprox, samples: int = 1_200_000) -> float:
    """Sup of |t^(beta-alpha) - r(t)| over a dense log+linear grid.

    Evaluated in 80-bit arithmetic; the grid mixes a geometric part reaching
    below the innermost alternation cluster with a uniform part.
    """
    half = samples // 2
    t_floor = max(min(1e-16, _cluster_floor(r.params) / 100.0), 1e-280)
    grid = np.concatenate([np.geomspace(t_floor, 1.0, half), np.linspace(0.0, 1.0, half)])
    err = _scan_error_longdouble(r.numerator, r.denominator, params_exponent(r.params), grid)
    return float(np.max(np.abs(err)))


def params_exponent(params: BuraParams) -> float:
    return float(params.beta) - params.alpha


def evaluate_rational(r: RationalApprox, t) -> np.ndarray | float:
    """Evaluate r(t) in double precision (scalar or array argument).

    On [0, 1] the certified approximants have all-positive monomial
    coefficients, so Horner evaluation is cancellation-free.  Outside the
    interval the value is diagnostic only; a pole hit raises.
    """
    tt = np.asarray(t, dtype=np.float64)
    pv = np.zeros_like(tt)
    qv = np.zeros_like(tt)
    qmag = np.zeros_like(tt)
    at = np.abs(tt)
    for c in r.numerator[::-1]:
        pv = pv * tt + c
    for c in r.denominator[::-1]:
        qv = qv * tt + c
        qmag = qmag * at + abs(c)
    near_pole = np.abs(qv) <= 1e-12 * qmag
    if np.any(near_pole):
        where = np.atleast_1d(tt)[np.atleast_1d(near_pole)][0]
        raise PoleHit(f"evaluation point {where} coincides with a pole of r")
    out = pv / qv
    return float(out) if np.isscalar(t) or out.ndim == 0 else out
