"""Tests for the scalar special-function layer.

Reference values come from closed-form algebra (polynomial incomplete-beta
cases, rising-factorial products) and from mpmath/scipy evaluated at high
precision, frozen here as literals where a single number is checked.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
import scipy.special as sc
import scipy.stats as st

from bppdist import (
    DEFAULT_QUADRATURE,
    MomentValue,
    QuadratureNonConvergence,
    QuadratureSpec,
    appell_f1,
    beta_density,
    integrate,
    ln_beta,
    ln_gamma,
    pochhammer_rising,
    reg_inc_beta,
)

mpmath.mp.dps = 40


class TestLnGamma:
    @pytest.mark.parametrize(
        "x, expected",
        [
            (1.0, 0.0),
            (2.0, 0.0),
            (5.0, math.log(24.0)),
            (0.5, math.log(math.sqrt(math.pi))),
        ],
    )
    def test_known_values(self, x, expected):
        assert ln_gamma(x) == pytest.approx(expected, rel=1e-14, abs=1e-14)

    @pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
    def test_nonpositive_rejected(self, x):
        with pytest.raises(ValueError):
            ln_gamma(x)

    def test_ln_beta_symmetric_and_consistent(self):
        for a, b in [(0.5, 0.5), (1.0, 3.0), (2.5, 7.25), (40.0, 3.0)]:
            assert ln_beta(a, b) == ln_beta(b, a)
            expected = float(mpmath.log(mpmath.beta(a, b)))
            assert ln_beta(a, b) == pytest.approx(expected, rel=1e-13)


class TestRegIncBeta:
    def test_polynomial_case(self):
        # For (a, b) = (2, 3) the regularized incomplete beta is the
        # polynomial 6x^2 - 8x^3 + 3x^4; at x = 1/4 that is exactly 67/256.
        assert reg_inc_beta(0.25, 2.0, 3.0) == pytest.approx(67.0 / 256.0, rel=1e-14)

    def test_endpoints(self):
        assert reg_inc_beta(0.0, 3.0, 5.0) == 0.0
        assert reg_inc_beta(1.0, 3.0, 5.0) == 1.0

    @pytest.mark.parametrize("x", [0.0, 0.125, 0.5, 0.875, 1.0])
    def test_uniform_case_is_identity(self, x):
        assert reg_inc_beta(x, 1.0, 1.0) == pytest.approx(x, abs=1e-15)

    @pytest.mark.parametrize("a, b", [(0.5, 0.5), (1.0, 4.0), (2.5, 7.0), (7.0, 2.5)])
    def test_reflection_symmetry(self, a, b):
        for x in np.linspace(0.0, 1.0, 21):
            total = reg_inc_beta(float(x), a, b) + reg_inc_beta(1.0 - float(x), b, a)
            assert total == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("a, b", [(0.5, 0.5), (1.0, 9.0), (12.5, 4.25)])
    def test_matches_scipy_moderate_parameters(self, a, b):
        for x in (1e-6, 0.01, 0.3, 0.5, 0.7, 0.99, 1.0 - 1e-6):
            ours = reg_inc_beta(x, a, b)
            ref = float(sc.betainc(a, b, x))
            assert ours == pytest.approx(ref, rel=1e-12, abs=1e-300)

    @pytest.mark.parametrize(
        "a, b",
        [(3.0, 9999.0), (9999.0, 3.0), (500.0, 500.0), (999991.0, 10.0)],
    )
    def test_matches_scipy_extreme_parameters(self, a, b):
        # The contract is absolute error <= 1e-12; relative accuracy in the
        # far tails is additionally checked at a looser 1e-10.
        for x in (1e-6, 0.01, 0.3, 0.5, 0.7, 0.99, 1.0 - 1e-6):
            ours = reg_inc_beta(x, a, b)
            ref = float(sc.betainc(a, b, x))
            assert abs(ours - ref) <= 1e-12
            if ref > 1e-280:
                assert ours == pytest.approx(ref, rel=1e-10)

    def test_closed_forms_a1_b1(self):
        for x in (0.05, 0.4, 0.95):
            assert reg_inc_beta(x, 1.0, 6.0) == pytest.approx(
                -math.expm1(6.0 * math.log1p(-x)), rel=1e-13
            )
            assert reg_inc_beta(x, 6.0, 1.0) == pytest.approx(x**6, rel=1e-13)

    def test_monotone_in_x(self):
        xs = np.linspace(0.0, 1.0, 101)
        vals = [reg_inc_beta(float(x), 2.5, 4.0) for x in xs]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    @pytest.mark.parametrize("bad", [-0.1, 1.1])
    def test_x_out_of_range_rejected(self, bad):
        with pytest.raises(ValueError):
            reg_inc_beta(bad, 2.0, 3.0)

    @pytest.mark.parametrize("a, b", [(0.0, 1.0), (1.0, 0.0), (-2.0, 3.0)])
    def test_nonpositive_parameters_rejected(self, a, b):
        with pytest.raises(ValueError):
            reg_inc_beta(0.5, a, b)


class TestPochhammerRising:
    def test_integer_product_cases(self):
        assert float(pochhammer_rising(3.0, 2.0)) == pytest.approx(12.0, rel=1e-14)
        assert float(pochhammer_rising(1.0, 5.0)) == pytest.approx(120.0, rel=1e-14)
        assert float(pochhammer_rising(2.0, 0.0)) == 1.0

    @pytest.mark.parametrize("x", [0.3, 1.0, 2.5, 7.25])
    @pytest.mark.parametrize("k", [1, 3, 10, 64])
    def test_product_identity(self, x, k):
        product = 1.0
        for i in range(k):
            product *= x + i
        assert float(pochhammer_rising(x, float(k))) == pytest.approx(product, rel=1e-10)

    @pytest.mark.parametrize(
        "x, q",
        [(0.5, 0.25), (2.0, -1.5), (3.7, 1.3), (10.0, -0.5), (1.0, 0.5)],
    )
    def test_fractional_matches_gamma_ratio(self, x, q):
        ref = float(mpmath.gamma(x + q) / mpmath.gamma(x))
        assert float(pochhammer_rising(x, q)) == pytest.approx(ref, rel=1e-12)

    @pytest.mark.parametrize("x, q", [(1.0, -1.0), (1.0, -1.5), (2.0, -2.0), (0.5, -0.5)])
    def test_infinite_branch(self, x, q):
        value = pochhammer_rising(x, q)
        assert not value.is_finite
        assert math.isinf(float(value))

    def test_boundary_is_finite_side(self):
        # x + q barely positive stays finite.
        assert pochhammer_rising(2.0, -1.999).is_finite

    @pytest.mark.parametrize("x", [0.0, -1.0])
    def test_nonpositive_base_rejected(self, x):
        with pytest.raises(ValueError):
            pochhammer_rising(x, 1.0)

    def test_moment_value_semantics(self):
        finite = MomentValue(2.5)
        assert finite.is_finite and float(finite) == 2.5
        inf = MomentValue.infinite()
        assert not inf.is_finite and math.isinf(float(inf))


class TestBetaDensity:
    def test_uniform_density(self):
        assert beta_density(0.37, 1.0, 1.0) == pytest.approx(1.0, rel=1e-15)

    @pytest.mark.parametrize("a, b", [(0.5, 0.5), (2.0, 3.0), (5.0, 1.0), (10.5, 0.5)])
    def test_matches_scipy(self, a, b):
        for x in (0.01, 0.25, 0.5, 0.75, 0.99):
            assert beta_density(x, a, b) == pytest.approx(
                float(st.beta.pdf(x, a, b)), rel=1e-12
            )

    def test_endpoint_conventions(self):
        assert math.isinf(beta_density(0.0, 0.5, 2.0))
        assert beta_density(0.0, 1.0, 3.0) == pytest.approx(3.0, rel=1e-13)
        assert beta_density(0.0, 2.0, 3.0) == 0.0
        assert math.isinf(beta_density(1.0, 2.0, 0.5))
        assert beta_density(1.0, 3.0, 1.0) == pytest.approx(3.0, rel=1e-13)
        assert beta_density(1.0, 3.0, 2.0) == 0.0

    @pytest.mark.parametrize("a", [0.5, 1.0, 1.5, 2.0, 5.0, 10.5])
    @pytest.mark.parametrize("b", [0.5, 1.0, 1.5, 2.0, 5.0, 10.5])
    def test_normalizes_under_quadrature(self, a, b):
        mass = integrate(lambda t: np.asarray([beta_density(float(x), a, b) for x in np.atleast_1d(t)]), 0.0, 1.0)
        assert mass == pytest.approx(1.0, abs=1e-9)


class TestIntegrate:
    def test_constant_and_linear(self):
        assert integrate(lambda t: np.ones_like(t), 0.0, 1.0) == pytest.approx(1.0, abs=1e-14)
        assert integrate(lambda t: 2.0 * t, 0.0, 1.0) == pytest.approx(1.0, abs=1e-14)

    def test_smooth_oscillatory(self):
        assert integrate(np.sin, 0.0, math.pi) == pytest.approx(2.0, abs=1e-12)

    def test_integrable_endpoint_singularity(self):
        value = integrate(lambda t: t**-0.5, 0.0, 1.0)
        assert value == pytest.approx(2.0, rel=1e-10)

    def test_shifted_interval(self):
        value = integrate(lambda t: np.exp(-t), 2.0, 5.0)
        assert value == pytest.approx(math.exp(-2.0) - math.exp(-5.0), rel=1e-12)

    def test_deterministic_repeatable(self):
        first = integrate(lambda t: np.cos(3.0 * t) * t**2, 0.0, 2.0)
        second = integrate(lambda t: np.cos(3.0 * t) * t**2, 0.0, 2.0)
        assert first == second

    def test_near_nonintegrable_raises_with_diagnostics(self):
        with pytest.raises(QuadratureNonConvergence) as excinfo:
            integrate(lambda t: t**-0.999, 0.0, 1.0)
        err = excinfo.value
        assert math.isfinite(err.estimate)
        assert err.error > 0.0

    def test_nonfinite_integrand_rejected(self):
        with pytest.raises(ValueError):
            integrate(lambda t: np.where(t < 0.5, np.inf, 1.0), 0.0, 1.0)

    def test_bad_interval_rejected(self):
        with pytest.raises(ValueError):
            integrate(lambda t: t, 1.0, 0.0)
        with pytest.raises(ValueError):
            integrate(lambda t: t, 0.0, math.inf)

    def test_quadrature_spec_validation(self):
        with pytest.raises(ValueError):
            QuadratureSpec(abs_tol=0.0)
        with pytest.raises(ValueError):
            QuadratureSpec(rel_tol=-1.0)
        with pytest.raises(ValueError):
            QuadratureSpec(max_depth=0)
        assert DEFAULT_QUADRATURE.abs_tol == 1e-12
        assert DEFAULT_QUADRATURE.rel_tol == 1e-10

    def test_loose_tolerance_spec_accepted(self):
        spec = QuadratureSpec(abs_tol=1e-6, rel_tol=1e-6, max_depth=30)
        value = integrate(lambda t: np.exp(t), 0.0, 1.0, spec)
        assert value == pytest.approx(math.e - 1.0, rel=1e-6)


class TestAppellF1:
    def test_terminating_series_value(self):
        # b1 = -1 terminates the series; the exact value is a one-term sum
        # that mpmath reproduces to full precision.
        value = appell_f1(2.0, -1.0, 0.5, 3.0, 1.0, -3.0)
        assert value == pytest.approx(0.217283950617284, rel=1e-8)

    def test_trivial_cases(self):
        assert appell_f1(1.5, 0.0, 0.0, 2.5, 0.5, -0.5) == pytest.approx(1.0, rel=1e-10)
        assert appell_f1(1.5, 0.7, 0.3, 2.5, 0.0, 0.0) == pytest.approx(1.0, rel=1e-10)

    @pytest.mark.parametrize(
        "a, b1, b2, c, x",
        [(1.2, 0.4, 0.9, 2.7, 0.35), (2.0, -1.0, 0.5, 3.0, -0.6)],
    )
    def test_equal_arguments_collapse_to_gauss_2f1(self, a, b1, b2, c, x):
        ours = appell_f1(a, b1, b2, c, x, x)
        ref = float(mpmath.hyp2f1(a, b1 + b2, c, x))
        assert ours == pytest.approx(ref, rel=1e-8)

    def test_vanishing_second_parameter_collapses(self):
        ours = appell_f1(1.5, 0.8, 0.0, 3.0, 0.4, -0.9)
        ref = float(mpmath.hyp2f1(1.5, 0.8, 3.0, 0.4))
        assert ours == pytest.approx(ref, rel=1e-8)

    def test_matches_mpmath_interior_point(self):
        ours = appell_f1(1.5, 0.3, 0.4, 3.2, 0.2, -0.5)
        ref = float(mpmath.appellf1(1.5, 0.3, 0.4, 3.2, 0.2, -0.5))
        assert ours == pytest.approx(ref, rel=1e-8)

    def test_convergence_guards(self):
        with pytest.raises(ValueError):
            appell_f1(3.0, 0.5, 0.5, 2.0, 0.5, 0.5)  # needs c > a
        with pytest.raises(ValueError):
            appell_f1(1.0, 0.5, 0.5, 2.0, 1.2, 0.5)  # x beyond 1
        with pytest.raises(ValueError):
            appell_f1(1.0, 0.5, 0.5, 2.0, 0.5, 1.0)  # y at 1
        with pytest.raises(ValueError):
            appell_f1(1.0, 2.5, 0.5, 2.0, 1.0, 0.5)  # divergent at x = 1
