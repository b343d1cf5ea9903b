"""Distribution-level checks: closed forms, quadrature, roundtrips, sampling."""

import math

import numpy as np
import pytest
from scipy import integrate, stats

from rayreg import RayleighMean, cdf, log_pdf, moments, pdf, quantile, sample


class TestPdf:
    def test_zero_at_origin(self):
        assert pdf(0.0, 1.0) == 0.0
        assert RayleighMean(2.5).pdf(0.0) == 0.0

    def test_unit_mean_closed_form(self):
        # (pi/2) * exp(-pi/4) evaluated directly
        expected = math.pi / 2 * math.exp(-math.pi / 4)
        assert pdf(1.0, 1.0) == pytest.approx(expected, abs=1e-15)
        assert pdf(1.0, 1.0) == pytest.approx(0.716186, abs=1e-6)

    @pytest.mark.parametrize("mean", [0.1, 0.5, 1.0, 3.0, 10.0])
    def test_integrates_to_one(self, mean):
        total, _ = integrate.quad(lambda y: pdf(y, mean), 0.0, np.inf)
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            pdf(-0.5, 1.0)
        with pytest.raises(ValueError):
            pdf(np.nan, 1.0)
        with pytest.raises(ValueError):
            pdf(np.inf, 1.0)

    def test_invalid_mean_rejected(self):
        for bad in (0.0, -1.0, np.nan, np.inf):
            with pytest.raises(ValueError):
                RayleighMean(bad)
            with pytest.raises(ValueError):
                pdf(1.0, bad)


class TestLogPdf:
    def test_quarter_pi_mean_squared(self):
        # mean = sqrt(pi)/2 makes mean**2 = pi/4, collapsing to log(2) - 1
        value = log_pdf(1.0, math.sqrt(math.pi) / 2)
        assert value == pytest.approx(math.log(2.0) - 1.0, abs=1e-15)

    def test_half_amplitude_closed_form(self):
        expected = math.log(math.pi / 2) + math.log(0.5) - math.pi / 16
        assert log_pdf(0.5, 1.0) == pytest.approx(expected, abs=1e-15)
        assert log_pdf(0.5, 1.0) == pytest.approx(-0.437914, abs=1e-6)

    def test_agrees_with_log_of_pdf(self):
        rng = np.random.default_rng(42)
        y = rng.uniform(0.05, 5.0, 20)
        mean = rng.uniform(0.2, 4.0, 20)
        np.testing.assert_allclose(log_pdf(y, mean), np.log(pdf(y, mean)),
                                   rtol=0, atol=1e-12)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            log_pdf(0.0, 1.0)
        with pytest.raises(ValueError):
            log_pdf(-1.0, 1.0)


class TestCdf:
    def test_zero_at_origin(self):
        for mean in (0.3, 1.0, 7.0):
            assert cdf(0.0, mean) == 0.0

    def test_unit_closed_form(self):
        assert cdf(1.0, 1.0) == pytest.approx(-math.expm1(-math.pi / 4), abs=1e-15)
        assert cdf(1.0, 1.0) == pytest.approx(0.544062, abs=1e-6)

    @pytest.mark.parametrize("u", [0.01, 0.5, 0.99])
    def test_quantile_roundtrip(self, u):
        for mean in (0.5, 1.0, 3.0):
            assert cdf(quantile(u, mean), mean) == pytest.approx(u, abs=1e-12)

    def test_monotone_in_y(self):
        y = np.linspace(0.0, 12.0, 400)
        values = cdf(y, 2.0)
        assert np.all(np.diff(values) >= 0.0)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            cdf(-0.1, 1.0)


class TestQuantile:
    def test_zero_probability(self):
        assert quantile(0.0, 3.7) == 0.0

    def test_median_closed_form(self):
        expected = 2.0 * math.sqrt(math.log(2.0) / math.pi)
        assert quantile(0.5, 1.0) == pytest.approx(expected, abs=1e-15)
        assert quantile(0.5, 1.0) == pytest.approx(0.939437, abs=1e-6)

    def test_inverse_of_cdf_example(self):
        u = -math.expm1(-math.pi / 4)
        assert quantile(u, 1.0) == pytest.approx(1.0, abs=1e-14)

    def test_domain_errors(self):
        for bad in (-0.01, 1.0, 1.5):
            with pytest.raises(ValueError):
                quantile(bad, 1.0)

    def test_scale_equivariance(self):
        rng = np.random.default_rng(11)
        u = rng.random(50)
        for c in (0.2, 3.0, 41.5):
            np.testing.assert_allclose(quantile(u, c * 1.3),
                                       c * quantile(u, 1.3), rtol=1e-14)

    def test_full_grid_roundtrip(self):
        u = np.linspace(0.0, 0.999999, 501)
        for mean in (0.1, 1.0, 10.0):
            np.testing.assert_allclose(cdf(quantile(u, mean), mean), u,
                                       rtol=0, atol=1e-12)


class TestSample:
    def test_moments_against_formulas(self):
        rng = np.random.default_rng(2024)
        draws = sample(2.0, rng, size=1_000_000)
        mean, var = moments(2.0)
        assert draws.mean() == pytest.approx(mean, abs=0.005)
        assert draws.var() == pytest.approx(var, abs=0.02)
        assert var == pytest.approx(1.092958, abs=1e-6)

    def test_deterministic_given_seed(self):
        a = sample(1.5, np.random.default_rng(7), size=64)
        b = sample(1.5, np.random.default_rng(7), size=64)
        np.testing.assert_array_equal(a, b)

    def test_strictly_positive(self):
        draws = sample(0.01, np.random.default_rng(0), size=10_000)
        assert np.all(draws > 0.0)

    def test_per_element_means(self):
        rng = np.random.default_rng(5)
        mean = np.array([0.5, 1.0, 2.0, 8.0])
        draws = sample(np.tile(mean, (50_000, 1)), rng)
        np.testing.assert_allclose(draws.mean(axis=0), mean, rtol=0.02)

    def test_size_with_array_mean_rejected(self):
        with pytest.raises(ValueError):
            sample(np.array([1.0, 2.0]), np.random.default_rng(0), size=5)

    def test_kolmogorov_smirnov_distance(self):
        rng = np.random.default_rng(99)
        draws = sample(1.7, rng, size=100_000)
        d = stats.kstest(draws, lambda t: cdf(t, 1.7)).statistic
        assert d < 0.01


class TestMoments:
    def test_unit_mean(self):
        mean, var = moments(1.0)
        assert mean == 1.0
        assert var == pytest.approx(4.0 / math.pi - 1.0, abs=1e-15)
        assert var == pytest.approx(0.273240, abs=1e-6)

    def test_scaling(self):
        mean, var = moments(2.0)
        assert mean == 2.0
        assert var == pytest.approx(4.0 * (4.0 / math.pi - 1.0), abs=1e-14)

    def test_mean_matches_quadrature(self):
        for m in (0.5, 2.0):
            integral, _ = integrate.quad(lambda y: y * pdf(y, m), 0.0, np.inf)
            assert integral == pytest.approx(m, abs=1e-8)
