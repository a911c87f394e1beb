"""Regime classification, error norms, sweeps, and decay fitting."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from kwidths import analysis, approximant
from kwidths.kernel import OperatorParams, TestFunction

HALF = OperatorParams(alpha=0.5)
F_EXAMPLE = TestFunction.power_pair(1.0, 2.0 / 3.0)


class TestClassify:
    def test_sup_case(self):
        case = analysis.classify(0.5, 4.0)
        assert case.tag == "SupCase"
        assert case.theoretical_kappa_per_n == pytest.approx(0.25)
        assert case.norm_used == "Linf"

    def test_critical_case(self):
        case = analysis.classify(0.5, 2.0, 3.0)
        assert case.tag == "Critical"
        assert case.theoretical_kappa_per_n == pytest.approx(1.0 / 3.0)
        assert case.norm_used == "L3"

    def test_subcritical_case(self):
        case = analysis.classify(0.3, 2.0, 1.2)
        assert case.tag == "SubCritical"
        assert case.theoretical_kappa_per_n == pytest.approx(0.5)

    def test_invalid_alpha_too_small(self):
        case = analysis.classify(0.25, 2.0, 2.0)
        assert case.tag == "Invalid"
        assert not case.valid
        assert "alpha" in case.reason

    def test_invalid_r_beta(self):
        # alpha = 0.35 < 1/p and r beta = 1.3 * 0.65 > ... pick r beta >= 1.
        case = analysis.classify(0.35, 2.0, 1.6)
        assert case.tag == "Invalid"

    def test_p_one_needs_r(self):
        # 1/p = 1 exceeds every admissible alpha, so p = 1 always lands
        # below the critical line and needs a target norm exponent.
        assert analysis.classify(0.7, 1.0).tag == "Invalid"
        case = analysis.classify(0.7, 1.0, 2.0)
        assert case.tag == "SubCritical"
        assert case.theoretical_kappa_per_n == pytest.approx(0.0)

    @given(
        alpha=st.floats(0.01, 0.99),
        p=st.floats(1.0, 20.0),
        r=st.floats(1.0, 20.0),
    )
    @settings(max_examples=100, deadline=None)
    def test_total_and_tagged(self, alpha, p, r):
        case = analysis.classify(alpha, p, r)
        assert case.tag in ("SupCase", "Critical", "SubCritical", "Invalid")
        if case.valid:
            assert case.theoretical_kappa_per_n == case.theoretical_kappa_per_n


class TestSupError:
    def test_zero_function(self):
        f = TestFunction.custom(lambda v: 0.0)
        phi = approximant.build(f, HALF, 2)
        rep = analysis.sup_error(f, phi, HALF, reference=lambda u: 0.0)
        assert rep.total == 0.0

    def test_total_is_max_of_intervals(self):
        phi = approximant.build(F_EXAMPLE, HALF, 3)
        rep = analysis.sup_error(F_EXAMPLE, phi, HALF)
        assert rep.total == max(e for _, e in rep.per_interval)
        assert rep.dim == 21

    def test_dense_grid_agreement(self):
        phi = approximant.build(F_EXAMPLE, HALF, 2)
        coarse = analysis.sup_error(F_EXAMPLE, phi, HALF, grid_per_interval=40)
        dense = analysis.sup_error(F_EXAMPLE, phi, HALF, grid_per_interval=400)
        assert coarse.total == pytest.approx(dense.total, rel=0.05)

    def test_order_seven_beats_order_two_everywhere(self):
        phi2 = approximant.build(F_EXAMPLE, HALF, 2, tail_cut_offset=-1)
        phi7 = approximant.build(F_EXAMPLE, HALF, 7, tail_cut_offset=-1)
        rep2 = dict(analysis.sup_error(F_EXAMPLE, phi2, HALF).per_interval)
        rep7 = dict(analysis.sup_error(F_EXAMPLE, phi7, HALF).per_interval)
        for label in rep2:
            assert rep7[label] < rep2[label]


class TestLrError:
    def test_zero_function(self):
        f = TestFunction.custom(lambda v: 0.0)
        phi = approximant.build(f, HALF, 2)
        rep = analysis.lr_error(f, phi, HALF, 2.0, reference=lambda u: 0.0)
        assert rep.total == 0.0

    def test_bounded_by_sup(self):
        phi = approximant.build(F_EXAMPLE, HALF, 3, tail_cut_offset=-1)
        sup = analysis.sup_error(F_EXAMPLE, phi, HALF)
        for r in (1.0, 2.0, 3.0):
            lr = analysis.lr_error(F_EXAMPLE, phi, HALF, r)
            assert lr.total <= sup.total * 1.05

    def test_subcritical_integrability_guard(self):
        phi = approximant.build(F_EXAMPLE, HALF, 2)
        regime = analysis.RegimeCase("SubCritical", 0.5, "L3")
        with pytest.raises(ValueError):
            analysis.lr_error(F_EXAMPLE, phi, HALF, 3.0, regime=regime)

    def test_r_below_one_rejected(self):
        phi = approximant.build(F_EXAMPLE, HALF, 2)
        with pytest.raises(ValueError):
            analysis.lr_error(F_EXAMPLE, phi, HALF, 0.5)


class TestDecaySweep:
    def test_row_bookkeeping(self):
        regime = analysis.classify(0.5, 4.0)
        reports = analysis.decay_sweep(F_EXAMPLE, HALF, regime, range(2, 5))
        assert [rep.n for rep in reports] == [2, 3, 4]
        assert [rep.dim for rep in reports] == [10, 21, 36]

    def test_invalid_regime_rejected(self):
        case = analysis.classify(0.25, 2.0, 2.0)
        with pytest.raises(ValueError):
            analysis.decay_sweep(F_EXAMPLE, HALF, case, range(2, 4))

    def test_errors_decrease(self):
        regime = analysis.classify(0.5, 4.0)
        reports = analysis.decay_sweep(F_EXAMPLE, HALF, regime, range(3, 7))
        totals = [rep.total for rep in reports]
        assert all(a > b for a, b in zip(totals, totals[1:]))


class TestFitKappa:
    def test_exact_geometric(self):
        pts = [(n, 2.0 ** (-0.3 * n)) for n in range(2, 9)]
        fit = analysis.fit_kappa(pts)
        assert fit.kappa_hat == pytest.approx(0.3, abs=1e-12)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
        assert fit.n_range == (2, 8)

    def test_scaled_geometric(self):
        pts = [(n, 5.0 * 2.0 ** (-0.3 * n)) for n in range(2, 9)]
        fit = analysis.fit_kappa(pts)
        assert fit.kappa_hat == pytest.approx(0.3, abs=1e-12)
        assert fit.intercept == pytest.approx(math.log2(5.0), abs=1e-10)

    @given(scale=st.floats(1e-6, 1e6))
    @settings(max_examples=30, deadline=None)
    def test_scale_invariance_of_slope(self, scale):
        base = [(n, 3.0 * 2.0 ** (-0.41 * n)) for n in range(3, 9)]
        scaled = [(n, scale * e) for n, e in base]
        assert analysis.fit_kappa(scaled).kappa_hat == pytest.approx(
            analysis.fit_kappa(base).kappa_hat, rel=1e-9
        )

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            analysis.fit_kappa([(2, 0.5), (3, 0.4)])

    def test_degenerate_n(self):
        with pytest.raises(ValueError):
            analysis.fit_kappa([(2, 0.5), (2, 0.4), (2, 0.3)])

    def test_nonpositive_error_rejected(self):
        with pytest.raises(ValueError):
            analysis.fit_kappa([(2, 0.5), (3, 0.0), (4, 0.1)])


class TestWidthBoundCurve:
    def test_exact_at_structured_dimensions(self):
        kappa = 0.25
        for n in range(1, 13):
            m = approximant.dimension(n)
            curve = analysis.width_bound_curve(kappa, [m])
            assert curve[0] == (m, 2.0 ** (-kappa * n))

    def test_specific_point(self):
        assert analysis.width_bound_curve(0.25, [10])[0][1] == pytest.approx(
            2.0 ** -0.5, rel=1e-15
        )

    def test_nonincreasing(self):
        curve = analysis.width_bound_curve(0.4, range(1, 200))
        vals = [b for _, b in curve]
        assert all(a >= b for a, b in zip(vals, vals[1:]))

    def test_domain(self):
        with pytest.raises(ValueError):
            analysis.width_bound_curve(0.0, [1])
