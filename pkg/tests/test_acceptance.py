"""Acceptance suite: every release criterion at its stated tolerance.

Each test prints one `[acceptance N] ... PASS/FAIL` line (visible with
pytest -s and in failure reports).  The nine reference approximations come
from the shared session fixture, so their cost is paid once.
"""

import time

import numpy as np
import pytest

import burafrac as bf
from burafrac.experiments import (
    ExperimentConfig,
    mesh_l2_error_bound,
    fit_loglog_slope,
    run_figures,
    run_table2,
)
from burafrac.rhs import RhsSpec, build_rhs

from conftest import TABLE1_REFERENCE

# published reference values of ||u_hr - u_h||_2 / ||f2||_2, keyed (mesh_exp, alpha, k)
REFERENCE_L2_TABLE = {
    (5, 0.25, 5): 6.3e-5, (5, 0.25, 6): 1.2e-4, (5, 0.25, 7): 7.5e-5,
    (5, 0.5, 5): 1.9e-4, (5, 0.5, 6): 3.1e-4, (5, 0.5, 7): 1.0e-4,
    (5, 0.75, 5): 8.5e-4, (5, 0.75, 6): 3.5e-4, (5, 0.75, 7): 2.1e-4,
    (6, 0.25, 5): 6.8e-4, (6, 0.25, 6): 2.1e-4, (6, 0.25, 7): 1.2e-4,
    (6, 0.5, 5): 9.3e-4, (6, 0.5, 6): 6.2e-4, (6, 0.5, 7): 2.6e-4,
    (6, 0.75, 5): 3.0e-4, (6, 0.75, 6): 7.3e-4, (6, 0.75, 7): 1.9e-4,
    (7, 0.25, 5): 4.9e-3, (7, 0.25, 6): 9.9e-4, (7, 0.25, 7): 2.2e-4,
    (7, 0.5, 5): 3.2e-3, (7, 0.5, 6): 1.3e-3, (7, 0.5, 7): 5.5e-4,
    (7, 0.75, 5): 1.6e-3, (7, 0.75, 6): 1.0e-3, (7, 0.75, 7): 6.6e-5,
    (8, 0.25, 5): 1.2e-2, (8, 0.25, 6): 4.9e-3, (8, 0.25, 7): 1.0e-3,
    (8, 0.5, 5): 5.0e-3, (8, 0.5, 6): 2.4e-3, (8, 0.5, 7): 1.0e-3,
    (8, 0.75, 5): 2.7e-3, (8, 0.75, 6): 6.7e-4, (8, 0.75, 7): 4.4e-4,
    (9, 0.25, 5): 3.7e-2, (9, 0.25, 6): 9.6e-3, (9, 0.25, 7): 4.9e-3,
    (9, 0.5, 5): 5.6e-3, (9, 0.5, 6): 1.3e-3, (9, 0.5, 7): 1.2e-3,
    (9, 0.75, 5): 8.2e-4, (9, 0.75, 6): 1.3e-3, (9, 0.75, 7): 1.1e-3,
    (10, 0.25, 5): 2.1e-2, (10, 0.25, 6): 3.6e-2, (10, 0.25, 7): 9.5e-3,
    (10, 0.5, 5): 2.4e-2, (10, 0.5, 6): 8.8e-3, (10, 0.5, 7): 1.4e-3,
    (10, 0.75, 5): 5.8e-3, (10, 0.75, 6): 3.0e-3, (10, 0.75, 7): 1.5e-3,
    (11, 0.25, 5): 1.9e-1, (11, 0.25, 6): 2.3e-2, (11, 0.25, 7): 3.6e-2,
    (11, 0.5, 5): 4.2e-2, (11, 0.5, 6): 1.4e-2, (11, 0.5, 7): 8.9e-3,
    (11, 0.75, 5): 1.6e-3, (11, 0.75, 6): 9.9e-4, (11, 0.75, 7): 4.3e-4,
}


def _report(num: int, name: str, ok: bool, detail: str = ""):
    print(f"[acceptance {num:2d}] {name}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
    assert ok, f"criterion {num} ({name}): {detail}"


def test_criterion_1_table1_reproduction(table1_data):
    results, seconds = table1_data
    worst = 0.0
    for (alpha, k), (r, _) in results.items():
        ref = TABLE1_REFERENCE[(alpha, k)]
        worst = max(worst, abs(r.minimax_error - ref) / ref)
    ok = worst <= 0.01 and seconds <= 60.0
    _report(1, "table-1 minimax errors (<=1%, <=60s)", ok,
            f"worst rel dev {worst:.2e}, compute time {seconds:.1f}s")


def test_criterion_2_equioscillation(table1_data):
    results, _ = table1_data
    worst_spread = 0.0
    counts_ok = True
    for (alpha, k), (r, _) in results.items():
        rep = bf.verify_equioscillation(r)
        counts_ok &= len(rep.points) == 2 * k + 2 and rep.alternation_ok
        worst_spread = max(worst_spread, rep.relative_spread)
    ok = counts_ok and worst_spread <= 1e-6
    _report(2, "2k+2 alternating extrema, spread <= 1e-6", ok,
            f"worst spread {worst_spread:.2e}")


def test_criterion_3_coefficient_identities(table1_data):
    results, _ = table1_data
    worst_c0 = worst_res = 0.0
    for (alpha, k), (r, pf) in results.items():
        worst_c0 = max(worst_c0, abs(pf.inverse_part[0] - r.minimax_error) / r.minimax_error)
        worst_res = max(
            worst_res,
            float(np.max(np.abs(pf.residues * pf.poles - pf.residues_raw) / np.abs(pf.residues_raw))),
        )
    ok = worst_c0 <= 1e-8 and worst_res <= 1e-8
    _report(3, "c0_1 = E and c_j d_j = cstar_j (1e-8 rel)", ok,
            f"c0 dev {worst_c0:.2e}, residue dev {worst_res:.2e}")


def test_criterion_4_sign_structure(table1_data):
    results, _ = table1_data
    ok = True
    for (alpha, k), (r, pf) in results.items():
        cert = bf.check_positivity_conditions(pf)
        ok &= bool(np.all(pf.poles < 0)) and bool(np.all(pf.residues > 0))
        ok &= cert.certified and bf.verify_interlacing(r)
    _report(4, "poles < 0, residues > 0, interlacing, certificate", ok)


def test_criterion_5_stahl_consistency(table1_data):
    results, _ = table1_data
    margins = []
    for (alpha, k), (r, _) in results.items():
        bound = bf.stahl_bound(alpha, k)
        margins.append(bound / r.minimax_error)
    ok = all(m >= 1.0 for m in margins)
    _report(5, "E below the asymptotic envelope (no low-order term)", ok,
            f"min bound/E ratio {min(margins):.3f}")


def test_criterion_6_energy_error_bound(table1_data):
    results, _ = table1_data
    rng = np.random.default_rng(20260810)
    start = time.perf_counter()
    worst = 0.0
    ok = True
    for n in (255, 511, 1023, 2047):
        a = bf.laplacian_1d(n)
        vectors = [build_rhs(RhsSpec(kind="f1"), n), build_rhs(RhsSpec(kind="f2"), n)]
        vectors += [rng.standard_normal(n) for _ in range(5)]
        for (alpha, k), (r, pf) in results.items():
            for f in vectors:
                for gamma in (0.0, 1.0):
                    rep = bf.relative_error_report(pf, a, alpha, 1, f, gamma)
                    ok &= rep.bound_satisfied
                    worst = max(worst, rep.ratio / rep.bound_E)
    elapsed = time.perf_counter() - start
    ok = ok and elapsed <= 300.0
    _report(6, "energy-norm error bound, gamma in {0,1}", ok,
            f"worst ratio/E {worst:.4f}, {elapsed:.1f}s")


def test_criterion_7_doubly_nonnegative(table1_data):
    results, _ = table1_data
    worst_min = 0.0
    worst_defect = 0.0
    ok = True
    for n in (100, 255):
        a = bf.laplacian_1d(n)
        for (alpha, k), (_, pf) in results.items():
            rep = bf.verify_doubly_nonnegative(pf, a)
            ok &= rep.nonnegative and rep.symmetric
            worst_min = min(worst_min, rep.min_entry / rep.max_entry)
            worst_defect = max(worst_defect, rep.symmetry_defect)
    ok = ok and worst_min >= -1e-12 and worst_defect <= 1e-12
    _report(7, "materialized operator doubly nonnegative", ok,
            f"min/max entry {worst_min:.2e}, symmetry defect {worst_defect:.2e}")


def test_criterion_8_monotonicity_fixtures():
    a1 = np.array([[-1.0, 3.0], [2.0, -4.0]])
    a2 = a1 + 6.0 * np.eye(2)
    checks = [
        not bf.is_m_matrix(a1),
        bf.is_monotone_dense(a1),
        not bf.is_monotone_dense(a2),
        bf.is_m_matrix(bf.laplacian_1d(50).matrix),
    ]
    second_diff = bf.SparseSpdMatrix.from_tridiagonal(np.full(30, 2.0), np.full(29, -1.0))
    checks.append(bf.is_m_matrix(second_diff))
    checks.append(bf.is_m_matrix(bf.normalize(second_diff).matrix))
    ok = all(checks)
    _report(8, "monotonicity and M-matrix fixtures", ok, f"verdicts {checks}")


def test_criterion_9_table2_and_slopes(table1_data):
    config = ExperimentConfig()
    table = run_table2(config)
    worst_factor = 1.0
    bound_ok = True
    for key, printed in REFERENCE_L2_TABLE.items():
        ours = table[key]
        factor = ours / printed
        worst_factor = max(worst_factor, factor, 1.0 / factor)
        bound_ok &= ours <= mesh_l2_error_bound(key[1], key[2], 2.0 ** -key[0])
    bundle = run_figures(config)
    slope_devs = {}
    for alpha in config.alphas:
        cols = bundle["fig3"][alpha]
        hs = np.concatenate([cols["h"] for _ in config.ks])
        ratios = np.concatenate([cols[f"ratio_k{k}"] for k in config.ks])
        slope = fit_loglog_slope(hs, ratios)
        slope_devs[alpha] = abs(slope - (-2.0 * (1.0 - alpha)))
    ok = worst_factor <= 2.0 and bound_ok and all(d <= 0.2 for d in slope_devs.values())
    _report(9, "table-2 within factor 2 + envelope; slope fits", ok,
            f"worst cell factor {worst_factor:.2f}, slope devs "
            + ", ".join(f"alpha={a}: {d:.3f}" for a, d in slope_devs.items()))


def test_criterion_10_oracle_self_consistency():
    worst_semi = worst_direct = 0.0
    for n in (100, 256, 511):
        a = bf.laplacian_1d(n)
        rng = np.random.default_rng(n)
        f = rng.standard_normal(n)
        u = bf.exact_frac_apply(a, 0.7, f)
        u12 = bf.exact_frac_apply(a, 0.3, bf.exact_frac_apply(a, 0.4, f))
        worst_semi = max(worst_semi, float(np.linalg.norm(u12 - u) / np.linalg.norm(u)))
        direct = np.linalg.solve(a.matrix.as_dense(), f)
        u1 = bf.exact_frac_apply(a, 1.0, f)
        worst_direct = max(worst_direct, float(np.linalg.norm(u1 - direct) / np.linalg.norm(direct)))
    ok = worst_semi <= 1e-10 and worst_direct <= 1e-11
    _report(10, "oracle semigroup and integer-power consistency", ok,
            f"semigroup {worst_semi:.2e}, alpha=1 {worst_direct:.2e}")
