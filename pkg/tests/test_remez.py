"""Minimax computation: reference errors, trivial cases, evaluation, bounds."""

import math

import numpy as np
import pytest

import burafrac as bf
from burafrac.remez import certified_sup_error, default_precision_bits

from conftest import TABLE1_REFERENCE


def test_reference_errors_within_one_percent(table1_data):
    results, _ = table1_data
    for (alpha, k), (r, _) in results.items():
        ref = TABLE1_REFERENCE[(alpha, k)]
        assert abs(r.minimax_error - ref) / ref <= 0.01, (alpha, k, r.minimax_error)


def test_degree_zero_best_constant_is_half():
    # best constant for monotone t^(1/2) on [0, 1] is the midrange of {0, 1}
    r = bf.bura_compute(bf.BuraParams(alpha=0.5, m=0, k=0))
    assert r.minimax_error == pytest.approx(0.5, rel=1e-12)
    assert bf.evaluate_rational(r, 0.7) == pytest.approx(0.5, rel=1e-12)


def test_value_at_zero_equals_minimax_error(table1_data):
    # r(0) = E for the diagonal beta=1 family
    results, _ = table1_data
    for (alpha, k), (r, _) in results.items():
        assert bf.evaluate_rational(r, 0.0) == pytest.approx(r.minimax_error, rel=1e-8)


def test_dense_sampling_never_exceeds_reported_error(table1_data):
    results, _ = table1_data
    for (alpha, k), (r, _) in results.items():
        sup = certified_sup_error(r, samples=1_200_000)
        assert sup <= r.minimax_error * (1.0 + 1e-3), (alpha, k)


def test_uniform_sampling_oracle_alpha_half_k5(table1_data):
    # dense uniform grid against the published E for alpha=0.5, k=5
    results, _ = table1_data
    r, _ = results[(0.5, 5)]
    t = np.linspace(0.0, 1.0, 1_000_001)
    err = np.abs(np.sqrt(t) - bf.evaluate_rational(r, t))
    assert float(err.max()) <= 2.6896e-4 * (1.0 + 1e-3)


def test_evaluate_outside_interval_and_pole_hit(small_bura):
    r, pf = small_bura
    # diagnostics outside [0, 1] are allowed
    assert np.isfinite(bf.evaluate_rational(r, 1.5))
    with pytest.raises(bf.PoleHit):
        bf.evaluate_rational(r, float(pf.poles[0]))


def test_stahl_bound_value_and_monotonicity():
    # alpha=0.75, k=7: 4^1.25 sin(pi/4) e^(-2 pi sqrt(1.75)) ~ 9.8e-4
    b = bf.stahl_bound(0.75, 7)
    expected = 4.0**1.25 * math.sin(math.pi / 4) * math.exp(-2 * math.pi * math.sqrt(1.75))
    assert b == pytest.approx(expected, rel=1e-12)
    assert b == pytest.approx(9.8e-4, rel=0.01)
    assert 7.8966e-4 <= b
    # strictly decreasing in k
    assert bf.stahl_bound(0.25, 7) < bf.stahl_bound(0.25, 5)
    # vanishes linearly as alpha -> 1 (the exponential factor tends to 1)
    near = [bf.stahl_bound(1.0 - eps, 6) / eps for eps in (1e-6, 1e-7)]
    assert near[0] == pytest.approx(near[1], rel=0.02)


def test_table1_errors_below_stahl_bound(table1_data):
    results, _ = table1_data
    for (alpha, k), (r, _) in results.items():
        assert r.minimax_error <= bf.stahl_bound(alpha, k), (alpha, k)


def test_precision_exhausted_at_low_bits():
    params = bf.BuraParams(alpha=0.75, k=7)
    with pytest.raises((bf.PrecisionExhausted, bf.NonConvergence)):
        bf.bura_compute(params, bf.RemezOptions(precision_bits=128))


def test_extreme_parameters_remain_certified():
    # beta - alpha near 0 collapses the alternation cluster scale, and larger
    # k needs more working precision (raised automatically by default)
    for alpha, k in ((0.95, 4), (0.5, 10)):
        r = bf.bura_compute(bf.BuraParams(alpha=alpha, k=k))
        rep = bf.verify_equioscillation(r)
        assert len(rep.points) == 2 * k + 2 and rep.alternation_ok, (alpha, k)
        pf = bf.partial_fractions(r)
        assert bf.check_positivity_conditions(pf).certified
        # the asymptotic envelope without its low-order factor is not a
        # universal bound: (0.95, 4) genuinely exceeds it, so it is only
        # asserted on the reference grid
    assert r.precision_bits > 320  # the k=10 job requires extra bits


def test_resolved_precision_rules(monkeypatch):
    monkeypatch.delenv("BURA_PRECISION_BITS", raising=False)
    opts = bf.RemezOptions()
    assert opts.resolved_precision(bf.BuraParams(alpha=0.5, k=5)) == 320
    assert opts.resolved_precision(bf.BuraParams(alpha=0.5, k=10)) > 320
    # explicit bits and the env override are honored literally
    assert bf.RemezOptions(precision_bits=200).resolved_precision(bf.BuraParams(alpha=0.5, k=10)) == 200
    monkeypatch.setenv("BURA_PRECISION_BITS", "256")
    assert opts.resolved_precision(bf.BuraParams(alpha=0.5, k=10)) == 256


def test_precision_env_override(monkeypatch):
    monkeypatch.setenv("BURA_PRECISION_BITS", "192")
    assert default_precision_bits() == 192
    monkeypatch.setenv("BURA_PRECISION_BITS", "32")
    with pytest.raises(ValueError):
        default_precision_bits()


def test_params_validation():
    with pytest.raises(ValueError):
        bf.BuraParams(alpha=1.5, k=3)
    with pytest.raises(ValueError):
        bf.BuraParams(alpha=0.5, beta=0, k=3)
    p = bf.BuraParams(alpha=0.5, k=4)
    assert p.m == 4 and p.n_reference == 10 and p.degree_ok
