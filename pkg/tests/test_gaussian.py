import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad

from bifreemax import is_bifree_maxid, is_quasi_monotone, semicircle_df
from bifreemax.gaussian import (
    GaussianCorr,
    NoDensityError,
    cdf_grid,
    comparison_integral,
    density,
    identity_check,
    kernel_denominator,
    maxid_verdict,
)
from bifreemax.quadrature import adaptive_panels


class TestDensity:
    def test_uncorrelated_center_value(self):
        assert density(0.0, 0.0, 0.0) == pytest.approx(1.0 / math.pi ** 2)

    def test_vanishes_on_the_edge(self):
        for c in (0.0, 0.4, -0.9):
            assert density(c, 2.0, 0.3) == 0.0
            assert density(c, 0.3, -2.0) == 0.0

    def test_correlated_center_value(self):
        # D_{1/2}(0, 0) = (3/4)^2
        expect = 0.75 / (4 * math.pi ** 2) * 4.0 / 0.5625
        assert density(0.5, 0.0, 0.0) == pytest.approx(expect)

    def test_outside_square_is_zero(self):
        assert density(0.3, 2.5, 0.0) == 0.0

    def test_singular_correlation_rejected(self):
        with pytest.raises(NoDensityError):
            density(1.0, 0.0, 0.0)
        with pytest.raises(NoDensityError):
            density(-1.0, 0.0, 0.0)

    def test_correlation_range_validated(self):
        with pytest.raises(ValueError):
            GaussianCorr(1.5)

    def test_symmetries(self):
        rng = np.random.default_rng(0)
        s, t = rng.uniform(-2, 2, (2, 40))
        for c in (0.3, 0.8, -0.6):
            assert_allclose(density(c, s, t), density(c, t, s), atol=1e-15)
            assert_allclose(density(-c, s, t), density(c, -s, t), atol=1e-15)

    def test_denominator_completed_square_form(self):
        rng = np.random.default_rng(1)
        s, t = rng.uniform(-2, 2, (2, 50))
        for c in (0.5, -0.7, 0.9):
            lhs = kernel_denominator(c, s, t)
            rhs = (2 * c * s - (1 + c * c) * t) ** 2 / 4.0 \
                + (1 - c * c) ** 2 * (4 - t * t) / 4.0
            assert_allclose(lhs, rhs, atol=1e-12)
            assert np.all(lhs > 0)

    def test_density_integrates_to_one_scipy_oracle(self):
        # independent double quadrature against the library's panels
        c = 0.4

        def inner(s):
            val, _ = quad(lambda t: density(c, s, t), -2, 2, limit=100)
            return val

        total, _ = quad(inner, -2, 2, limit=100)
        assert total == pytest.approx(1.0, abs=1e-7)


class TestIdentity:
    def test_uncorrelated_is_semicircle_area(self):
        r = identity_check(0.0, 0.7)
        assert r.reference == pytest.approx(2 * math.pi)
        assert r.error < 1e-9

    def test_table_against_closed_form(self):
        for c in (0.0, 0.3, -0.3, 0.5, -0.5, 0.7, -0.7):
            for x in (-2.0, -1.0, 0.0, 1.0, 2.0):
                r = identity_check(c, x)
                assert r.error <= 1e-6, (c, x, r.error)

    def test_against_scipy_oracle(self):
        for c, x in ((0.5, -2.0), (-0.7, 1.0)):
            val, _ = quad(lambda t: math.sqrt(4 - t * t)
                          / kernel_denominator(c, x, t), -2, 2, limit=200)
            r = identity_check(c, x)
            assert r.value == pytest.approx(val, abs=1e-7)

    def test_x_range_validated(self):
        with pytest.raises(ValueError):
            identity_check(0.5, 2.5)


class TestAdaptivePanels:
    def test_smooth_integral(self):
        val = adaptive_panels(np.sin, 0.0, math.pi, tol=1e-10)
        assert val == pytest.approx(2.0, abs=1e-10)

    def test_peaked_integrand_splits(self):
        val = adaptive_panels(lambda x: 1.0 / (1e-4 + x * x), -1, 1, tol=1e-9)
        expect = 2.0 / 1e-2 * math.atan(1.0 / 1e-2)
        assert val == pytest.approx(expect, rel=1e-8)


class TestCdfGrid:
    def test_total_mass(self):
        for c in (0.0, 0.5, -0.7):
            F = cdf_grid(c, resolution=81)
            assert F.eval(2.0, 2.0) == pytest.approx(1.0, abs=1e-6)

    def test_marginal_at_center(self):
        F = cdf_grid(0.3, resolution=81)
        assert F.eval(0.0, 2.0) == pytest.approx(0.5, abs=1e-6)

    def test_uncorrelated_factorizes(self):
        F = cdf_grid(0.0, resolution=81)
        m = F.marginal1.eval(F.xknots)
        assert np.max(np.abs(F.values - m[:, None] * m[None, :])) < 1e-6

    def test_marginals_match_semicircle(self):
        F = cdf_grid(0.5, resolution=81)
        sc = semicircle_df()
        assert np.max(np.abs(F.values[:, -1] - sc.eval(F.xknots))) < 1e-6
        assert np.max(np.abs(F.values[-1, :] - sc.eval(F.yknots))) < 1e-6

    def test_quasi_monotone_surface(self):
        F = cdf_grid(-0.5, resolution=61)
        assert is_quasi_monotone(F, tol=1e-9).ok

    def test_cdf_points_against_scipy_oracle(self):
        from scipy.integrate import dblquad
        c = 0.5
        F = cdf_grid(c, resolution=161)
        for (x, y) in ((0.3, -0.8), (-1.2, 1.1)):
            # compare at the nearest grid knot to avoid step-cell bias
            xi = F.xknots[np.argmin(np.abs(F.xknots - x))]
            yj = F.yknots[np.argmin(np.abs(F.yknots - y))]
            ref, _ = dblquad(lambda t, s: density(c, s, t), -2.0, xi,
                             -2.0, yj, epsabs=1e-10)
            assert F.eval(xi, yj) == pytest.approx(ref, abs=1e-8)

    def test_uncorrelated_grid_is_maxid(self):
        F = cdf_grid(0.0, resolution=61)
        assert is_bifree_maxid(F, tol=1e-6).status == "yes"


class TestComparisonIntegral:
    def test_sign_flips_with_correlation(self):
        rng = np.random.default_rng(2)
        for c in (0.3, 0.5, 0.7):
            for _ in range(4):
                x, y = rng.uniform(-1.9, 1.9, 2)
                assert comparison_integral(-c, x, y) < 0
                assert comparison_integral(c, x, y) > 0


class TestVerdicts:
    def test_divisible_cases(self):
        assert maxid_verdict(0.0).status == "maxid"
        assert maxid_verdict(1.0).status == "maxid"

    def test_negative_line_support(self):
        v = maxid_verdict(-1.0)
        assert v.status == "not-maxid"
        assert "rectangle" in v.mechanism

    def test_negative_correlation_witnesses(self):
        for c in (-0.7, -0.3):
            v = maxid_verdict(c)
            assert v.status == "not-maxid"
            w = v.witness
            assert w.mechanism == "ratio-decreasing-in-x"
            assert w.low_value - w.high_value > 1e-8
            assert w.x_low < w.x_high

    def test_positive_correlation_witnesses(self):
        for c in (0.3, 0.5, 0.7):
            v = maxid_verdict(c)
            assert v.status == "not-maxid"
            w = v.witness
            assert w.mechanism == "tail-functional-increasing-in-x"
            assert w.high_value - w.low_value > 1e-8
            # located near the lower corner
            assert w.x_high < 0.0 and w.y < -1.5

    def test_negative_witness_reverifies_on_refined_grid(self):
        # recompute the ratio at the reported points from a finer grid
        v = maxid_verdict(-0.5, resolution=61)
        w = v.witness
        F = cdf_grid(-0.5, resolution=121)
        m = semicircle_df()

        def ratio(x, y):
            return m.eval(x) * m.eval(y) / F.eval(x, y)

        drop = ratio(w.x_low, w.y) - ratio(w.x_high, w.y)
        assert drop > 1e-8
