"""Kernel transform, test functions, reference and closed-form values."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from kwidths import quadrature
from kwidths.kernel import (
    OperatorParams,
    TestFunction,
    apply_reference,
    closed_form_power_pair,
    kernel_tilde,
    op_norm_row_integral,
)


class TestOperatorParams:
    def test_beta_derived(self):
        p = OperatorParams(alpha=0.3)
        assert p.beta == 0.7
        assert p.alpha + p.beta == 1.0

    def test_from_beta(self):
        assert OperatorParams.from_beta(0.5).alpha == 0.5

    def test_domain(self):
        with pytest.raises(ValueError):
            OperatorParams(alpha=1.0)
        with pytest.raises(ValueError):
            OperatorParams.from_beta(0.0)


class TestKernelTilde:
    def test_u_one(self):
        p = OperatorParams(alpha=0.5)
        assert kernel_tilde(1.0, 0.3, p) == 1.0

    def test_center(self):
        p = OperatorParams(alpha=0.5)
        assert kernel_tilde(0.5, 0.5, p) == pytest.approx(0.75 ** -0.5, rel=1e-15)

    def test_origin_rejected(self):
        p = OperatorParams(alpha=0.5)
        with pytest.raises(ValueError):
            kernel_tilde(0.0, 0.0, p)

    @given(u=st.floats(0.0, 1.0), v=st.floats(0.001, 1.0))
    @settings(max_examples=50, deadline=None)
    def test_symmetry(self, u, v):
        p = OperatorParams(alpha=0.4)
        assert kernel_tilde(u, v, p) == kernel_tilde(v, u, p)


class TestTestFunction:
    def test_power_pair_exponents(self):
        f = TestFunction.power_pair(0.4, 1.7)
        assert f.left_exponent == pytest.approx(-0.6)
        assert f.right_exponent == pytest.approx(0.7)
        assert f.evaluator(0.5) == pytest.approx(0.5 ** -0.6 * 0.5 ** 0.7)

    def test_power_pair_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            TestFunction.power_pair(0.0, 1.0)

    def test_constant(self):
        f = TestFunction.constant(2.5)
        assert f.evaluator(0.123) == 2.5


class TestApplyReference:
    def test_constant_at_one(self):
        p = OperatorParams(alpha=0.5)
        f = TestFunction.constant()
        assert apply_reference(f, 1.0, p) == pytest.approx(1.0, abs=1e-10)

    def test_power_pair_at_one_is_beta_function(self):
        p = OperatorParams(alpha=0.5)
        f = TestFunction.power_pair(1.0, 2.0 / 3.0)
        assert apply_reference(f, 1.0, p) == pytest.approx(1.5, abs=1e-10)

    def test_transform_consistency(self):
        # Direct original-coordinate integral equals the transformed one.
        alpha = 0.6
        p = OperatorParams(alpha=alpha)
        f = TestFunction.power_pair(1.3, 0.8)
        for x in (0.2, 0.55, 0.9):
            u = 1.0 - x

            def original(y):
                # f(y) = f_tilde(1-y) = (1-y)^(nu-1) y^(mu-1).
                return (1.0 - y) ** 0.3 * y ** -0.2 * (1.0 - x * y) ** (alpha - 1.0)

            direct = quadrature.integrate(
                original, 0.0, 1.0,
                quadrature.SingularityHint("left", -0.2), tol=1e-10,
            ).value
            assert apply_reference(f, u, p) == pytest.approx(direct, abs=1e-8)

    def test_u_zero_rejected(self):
        p = OperatorParams(alpha=0.5)
        with pytest.raises(ValueError):
            apply_reference(TestFunction.constant(), 0.0, p)


class TestClosedFormPowerPair:
    def test_value_at_one(self):
        assert closed_form_power_pair(1.0, 0.5, 1.0, 2.0 / 3.0) == pytest.approx(
            1.5, abs=1e-10
        )

    def test_matches_reference_grid(self):
        cases = [(0.5, 1.0, 2.0 / 3.0), (0.5, 0.4, 1.0), (0.3, 1.0, 1.0)]
        for beta, nu, mu in cases:
            p = OperatorParams.from_beta(beta)
            f = TestFunction.power_pair(nu, mu)
            for i in range(1, 21):
                u = i / 20.0
                assert closed_form_power_pair(u, beta, nu, mu) == pytest.approx(
                    apply_reference(f, u, p), abs=1e-8
                )

    def test_sup_norm_of_example(self):
        # max over [0,1] of the beta=1/2, (nu,mu)=(1,2/3) solution; the
        # sup is attained in the u -> 0 limit, which equals B(1/2, 2/3).
        us = [0.0] + [u / 1000.0 for u in range(1, 1001)]
        vals = [closed_form_power_pair(u, 0.5, 1.0, 2.0 / 3.0) for u in us]
        assert max(vals) == pytest.approx(2.587, abs=5e-3)
        assert max(vals) == vals[0]

    def test_continuity_when_nu_exceeds_beta(self):
        # Finite limit at u = 0 when nu > beta.
        limit = closed_form_power_pair(0.0, 0.5, 1.0, 2.0 / 3.0)
        assert math.isfinite(limit)
        assert closed_form_power_pair(1e-8, 0.5, 1.0, 2.0 / 3.0) == pytest.approx(
            limit, abs=1e-3
        )

    def test_divergence_when_nu_below_beta(self):
        assert closed_form_power_pair(0.0, 0.7, 0.4, 1.0) == math.inf

    def test_smoothing_rate_near_zero(self):
        # For nu < beta the solution behaves like u^(nu-beta) near zero;
        # the scaled limit is Gamma(nu) Gamma(beta-nu) / Gamma(beta).
        beta, nu, mu = 0.7, 0.4, 1.0
        limit = (
            math.gamma(nu) * math.gamma(beta - nu) / math.gamma(beta)
        )
        ratios = []
        for k in range(5, 33):
            u = 2.0 ** -k
            ratios.append(closed_form_power_pair(u, beta, nu, mu) * u ** (beta - nu))
        gaps = [abs(rat - limit) for rat in ratios]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))
        assert ratios[-1] == pytest.approx(limit, rel=2e-3)

    def test_integer_nu_minus_beta_rejected(self):
        with pytest.raises(ValueError):
            closed_form_power_pair(0.25, 0.5, 1.5, 1.0)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            closed_form_power_pair(0.5, 0.5, -1.0, 1.0)
        with pytest.raises(ValueError):
            closed_form_power_pair(1.5, 0.5, 1.0, 1.0)


class TestRowIntegral:
    def test_endpoints(self):
        assert op_norm_row_integral(0.0, 0.5) == 1.0
        assert op_norm_row_integral(1.0, 0.5) == pytest.approx(2.0, rel=1e-12)

    def test_monotone_and_bounded(self):
        alpha = 0.5
        prev = 0.0
        for i in range(1001):
            x = i / 1000.0
            val = op_norm_row_integral(x, alpha)
            assert val >= prev - 1e-14
            assert val <= 1.0 / alpha + 1e-12
            prev = val
