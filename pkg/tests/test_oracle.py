"""Spectral oracle: exact fractional applications and energy norms."""

import numpy as np
import pytest

import burafrac as bf
from burafrac.oracle import decompose


class TestDecomposition:
    def test_analytic_orthonormality_and_residual(self):
        n = 150
        a = bf.laplacian_1d(n)
        eig = decompose(a)
        w = eig.eigenvectors
        gram = w.T @ w
        assert np.max(np.abs(gram - np.eye(n))) <= 1e-12
        dense = a.matrix.as_dense()
        res = dense @ w - w * eig.eigenvalues
        assert np.max(np.linalg.norm(res, axis=0)) <= 1e-11

    def test_dense_source_matches_analytic(self):
        n = 120
        a = bf.laplacian_1d(n)
        analytic = decompose(a)
        general = bf.NormalizedMatrix(matrix=a.matrix, scale=a.scale, spectral_bound_proof="gershgorin")
        dense = decompose(general)
        assert dense.source == "dense_solver"
        assert np.max(np.abs(dense.eigenvalues - analytic.eigenvalues)) <= 1e-12
        # subspace agreement: eigenvalues are simple, columns match up to sign
        dot = np.abs(np.sum(dense.eigenvectors * analytic.eigenvectors, axis=0))
        assert np.max(np.abs(dot - 1.0)) <= 1e-9

    def test_dense_cap(self):
        a = bf.laplacian_1d(64)
        general = bf.NormalizedMatrix(matrix=a.matrix, scale=a.scale, spectral_bound_proof="gershgorin")
        with pytest.raises(bf.DimensionTooLarge):
            decompose(general, dense_cap=10)


class TestExactFracApply:
    def test_alpha_one_matches_direct_solve(self):
        for n in (63, 256, 511):
            a = bf.laplacian_1d(n)
            rng = np.random.default_rng(n)
            f = rng.standard_normal(n)
            u = bf.exact_frac_apply(a, 1.0, f)
            direct = np.linalg.solve(a.matrix.as_dense(), f)
            assert np.linalg.norm(u - direct) / np.linalg.norm(direct) <= 1e-11

    def test_eigenvector_scaling(self):
        n = 40
        a = bf.laplacian_1d(n)
        lam = bf.laplacian_1d_eigenvalues(n)
        i = 11
        psi = np.sqrt(2.0 / (n + 1)) * np.sin((i + 1) * np.arange(1, n + 1) * np.pi / (n + 1))
        u = bf.exact_frac_apply(a, 0.37, psi)
        assert np.allclose(u, lam[i] ** -0.37 * psi, rtol=1e-12)

    def test_semigroup_composition(self):
        for n in (100, 512):
            a = bf.laplacian_1d(n)
            rng = np.random.default_rng(n + 1)
            f = rng.standard_normal(n)
            u12 = bf.exact_frac_apply(a, 0.3, bf.exact_frac_apply(a, 0.45, f))
            u = bf.exact_frac_apply(a, 0.75, f)
            assert np.linalg.norm(u12 - u) / np.linalg.norm(u) <= 1e-10


class TestEnergyNorm:
    def test_gamma_zero_is_euclidean(self):
        a = bf.laplacian_1d(80)
        v = np.random.default_rng(5).standard_normal(80)
        assert bf.energy_norm(a, 0.0, v) == pytest.approx(np.linalg.norm(v), rel=1e-12)

    def test_gamma_two_is_matvec_norm(self):
        a = bf.laplacian_1d(80)
        v = np.random.default_rng(6).standard_normal(80)
        assert bf.energy_norm(a, 2.0, v) == pytest.approx(np.linalg.norm(a.matrix.matvec(v)), rel=1e-11)

    def test_eigenvector_value(self):
        n = 33
        a = bf.laplacian_1d(n)
        lam = bf.laplacian_1d_eigenvalues(n)
        i = 4
        psi = np.sqrt(2.0 / (n + 1)) * np.sin((i + 1) * np.arange(1, n + 1) * np.pi / (n + 1))
        assert bf.energy_norm(a, 1.0, psi) == pytest.approx(np.sqrt(lam[i]), rel=1e-12)

    def test_log_convexity_interpolation(self):
        # Cauchy-Schwarz: ||v||_{A}^2 <= ||v||_{A^0} ||v||_{A^2}
        a = bf.laplacian_1d(70)
        rng = np.random.default_rng(9)
        for _ in range(5):
            v = rng.standard_normal(70)
            n0 = bf.energy_norm(a, 0.0, v)
            n1 = bf.energy_norm(a, 1.0, v)
            n2 = bf.energy_norm(a, 2.0, v)
            assert n1**2 <= n0 * n2 * (1.0 + 1e-12)

    def test_condition_number_chain(self):
        # ||v||_2 <= kappa(A) ||v||_{A^2} < h^-2 ||v||_{A^2}
        n = 255
        h = 1.0 / (n + 1)
        a = bf.laplacian_1d(n)
        lam = bf.laplacian_1d_eigenvalues(n)
        kappa = lam[-1] / lam[0]
        rng = np.random.default_rng(12)
        for _ in range(5):
            v = rng.standard_normal(n)
            l2 = np.linalg.norm(v)
            a2 = bf.energy_norm(a, 2.0, v)
            assert l2 <= kappa * a2 * (1.0 + 1e-10)
            assert kappa < h**-2


class TestErrorReport:
    def test_bound_holds_and_fields(self, small_bura):
        _, pf = small_bura
        a = bf.laplacian_1d(127)
        f = bf.build_rhs(bf.RhsSpec(kind="f2"), 127)
        rep = bf.relative_error_report(pf, a, 0.5, 1, f, gamma=1.0)
        assert rep.bound_satisfied
        assert rep.ratio == pytest.approx(rep.energy_error / rep.rhs_norm)
        assert rep.bound_E == pf.minimax_error

    def test_zero_rhs(self, small_bura):
        _, pf = small_bura
        a = bf.laplacian_1d(20)
        rep = bf.relative_error_report(pf, a, 0.5, 1, np.zeros(20), gamma=0.0)
        assert rep.energy_error == 0.0 and rep.ratio == 0.0 and rep.bound_satisfied

    def test_json_row_and_batch_csv(self, tmp_path, small_bura):
        _, pf = small_bura
        a = bf.laplacian_1d(31)
        f = bf.build_rhs(bf.RhsSpec(kind="f1"), 31)
        entries = []
        for gamma in (0.0, 1.0):
            rep = bf.relative_error_report(pf, a, 0.5, 1, f, gamma)
            doc = bf.error_report_to_dict(rep)
            assert set(doc) == {"gamma", "energy_error", "rhs_norm", "ratio", "bound_E", "bound_satisfied"}
            entries.append((0.5, 1, 3, 3, 31, rep))
        path = tmp_path / "reports.csv"
        bf.write_error_reports_csv(path, entries)
        lines = path.read_text().strip().split("\n")
        assert lines[0] == "alpha,beta,m,k,gamma,N,ratio,bound_E,satisfied"
        assert len(lines) == 3
        first = lines[1].split(",")
        assert float(first[0]) == 0.5 and int(first[5]) == 31
        assert first[8] == "True"
