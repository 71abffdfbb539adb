"""Shared fixtures: the nine reference approximations are computed once per
session (they are the expensive part) and reused by every test module."""

import time

import pytest

import burafrac as bf
from burafrac import experiments

TABLE1_ALPHAS = (0.25, 0.5, 0.75)
TABLE1_KS = (5, 6, 7)

# published minimax errors E(k, k; 1) for t^(1-alpha) on [0, 1]
TABLE1_REFERENCE = {
    (0.25, 5): 2.8676e-5,
    (0.25, 6): 9.2522e-6,
    (0.25, 7): 3.2566e-6,
    (0.50, 5): 2.6896e-4,
    (0.50, 6): 1.0747e-4,
    (0.50, 7): 4.6037e-5,
    (0.75, 5): 2.7162e-3,
    (0.75, 6): 1.4312e-3,
    (0.75, 7): 7.8966e-4,
}


@pytest.fixture(scope="session")
def table1_data():
    """(approximations, compute_seconds): all nine (alpha, k) pairs.

    compute_seconds covers only the minimax computation itself, not the
    pole extraction.
    """
    results = {}
    compute_seconds = 0.0
    for alpha in TABLE1_ALPHAS:
        for k in TABLE1_KS:
            params = bf.BuraParams(alpha=alpha, k=k)
            start = time.perf_counter()
            r = bf.bura_compute(params)
            compute_seconds += time.perf_counter() - start
            pf = bf.partial_fractions(r)
            results[(alpha, k)] = (r, pf)
            experiments._bura_cache[(alpha, 1, -1, k, 0)] = (r, pf)
    return results, compute_seconds


@pytest.fixture(scope="session")
def small_bura():
    """A cheap certified approximation for plumbing tests."""
    r, pf = experiments.get_approximation(0.5, 3)
    return r, pf
