"""Nystrom discretization, spectrum, and trace checks."""

import math

import numpy as np
import pytest

from kwidths import spectral, specfun, quadrature


class TestGradedGrid:
    def test_weights_sum_to_one(self):
        x, w = spectral.graded_grid(256, 20)
        assert float(w.sum()) == pytest.approx(1.0, abs=1e-14)
        assert np.all((x > 0.0) & (x < 1.0))

    def test_grading_concentrates_near_one(self):
        x, _ = spectral.graded_grid(256, 20)
        assert np.max(x) > 1.0 - 2.0 ** -19

    def test_caps(self):
        with pytest.raises(ValueError):
            spectral.graded_grid(spectral.MAX_GRID_SIZE + 1)
        with pytest.raises(ValueError):
            spectral.graded_grid(256, spectral.MAX_GRADING + 1)
        with pytest.raises(ValueError):
            spectral.graded_grid(1)


class TestNystromMatrix:
    def test_symmetric(self):
        A = spectral.nystrom_matrix(0.5, 128, 10)
        assert np.array_equal(A, A.T)

    def test_rank_one_limit(self):
        A = spectral.nystrom_matrix(1.0 - 1e-12, 128, 10)
        svs = spectral.singular_values(A)
        assert svs[0] == pytest.approx(1.0, abs=1e-6)
        assert svs[1] < 1e-8

    def test_frobenius_matches_kernel_square_integral(self):
        A = spectral.nystrom_matrix(0.5, 512, 40)
        frob_sq = float(np.sum(A * A))
        target = quadrature.integrate2d_kernel_sq(0.5).value
        assert frob_sq == pytest.approx(target, rel=1e-8)

    def test_domain(self):
        with pytest.raises(ValueError):
            spectral.nystrom_matrix(1.5, 64)


class TestSingularValues:
    def test_identity(self):
        svs = spectral.singular_values(np.eye(3))
        assert np.allclose(svs, [1.0, 1.0, 1.0])

    def test_diagonal_absolute_values(self):
        svs = spectral.singular_values(np.diag([3.0, -2.0, 1.0]))
        assert np.allclose(svs, [3.0, 2.0, 1.0])

    def test_rank_one(self):
        v = np.array([1.0, 2.0, 2.0])
        svs = spectral.singular_values(np.outer(v, v))
        assert svs[0] == pytest.approx(9.0, rel=1e-12)
        assert abs(svs[1]) < 1e-12

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError):
            spectral.singular_values(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestHsCheck:
    def test_alpha_half(self):
        hs_sum, closed, gap = spectral.hs_check(0.5, 512)
        assert closed == pytest.approx(math.pi ** 2 / 6.0, abs=1e-12)
        assert gap <= 0.02

    def test_alpha_three_quarters(self):
        hs_sum, closed, gap = spectral.hs_check(0.75, 512)
        assert closed == pytest.approx(specfun.hs_norm_squared(0.75), abs=1e-14)
        assert gap <= 0.02

    def test_refinement_improves(self):
        _, _, coarse = spectral.hs_check(0.5, 128, 10)
        _, _, fine = spectral.hs_check(0.5, 512, 40)
        assert fine <= coarse


class TestSchattenAndWidths:
    def test_trace_norm(self):
        assert spectral.schatten_norm(np.array([3.0, 2.0, 1.0]), 1.0) == 6.0

    def test_hs_norm(self):
        assert spectral.schatten_norm(
            np.array([3.0, 2.0, 1.0]), 2.0
        ) == pytest.approx(math.sqrt(14.0), rel=1e-14)

    def test_width_indexing(self):
        svs = np.array([3.0, 2.0, 1.0])
        assert spectral.width_l2(svs, 0) == 3.0
        assert spectral.width_l2(svs, 2) == 1.0
        with pytest.raises(IndexError):
            spectral.width_l2(svs, 3)

    def test_widths_nonincreasing(self):
        report = spectral.spectral_report(0.5, 256, 20)
        svs = np.array(report.singular_values)
        widths = [spectral.width_l2(svs, n) for n in range(30)]
        assert all(a >= b for a, b in zip(widths, widths[1:]))

    def test_schatten_partial_sums_converge(self):
        report = spectral.spectral_report(0.5, 512, 40)
        svs = np.array(report.singular_values[:40])
        for p in (0.5, 1.0, 2.0):
            head = float(np.sum(svs[:30] ** p))
            tail = float(np.sum(svs[30:40] ** p))
            assert tail / head < 0.01


class TestSqrtDecayFit:
    def test_synthetic_exact(self):
        m = np.arange(1, 60)
        svs = np.exp(-2.0 * np.sqrt(m))
        c_hat, r2 = spectral.sqrt_decay_fit(svs)
        assert c_hat == pytest.approx(2.0, rel=1e-10)
        assert r2 == pytest.approx(1.0, abs=1e-12)

    def test_real_spectrum(self):
        report = spectral.spectral_report(0.5, 512, 40)
        c_hat, r2 = spectral.sqrt_decay_fit(
            np.array(report.singular_values), m_max=40
        )
        assert r2 >= 0.98
        assert c_hat > 0.0

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            spectral.sqrt_decay_fit(np.array([0.5] * 5))


class TestReport:
    def test_internal_consistency(self):
        report = spectral.spectral_report(0.5, 256, 20)
        svs = np.array(report.singular_values)
        assert report.hs_sum == pytest.approx(float(np.sum(svs ** 2)), rel=1e-12)
        assert report.schatten[2.0] == pytest.approx(
            math.sqrt(report.hs_sum), rel=1e-12
        )

    def test_operator_norm_bound(self):
        for alpha in (0.3, 0.5, 0.75):
            report = spectral.spectral_report(alpha, 256, 20)
            assert report.singular_values[0] <= 1.0 / alpha + 0.05

    def test_no_significant_negative_eigenvalues(self):
        report = spectral.spectral_report(0.5, 256, 20)
        assert len(report.negative_eigenvalues) == 0
