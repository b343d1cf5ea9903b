"""Special-function checks against independent series/bisection oracles."""

import math

import numpy as np
import pytest
from scipy import integrate

from rayreg import (ChiSquare, chi_square_quantile, chi_square_survival,
                    std_normal_quantile)


def normal_cdf_oracle(x: float) -> float:
    """Standard normal cdf through the library-independent erf route."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def normal_quantile_oracle(p: float) -> float:
    """Bisection of the erf-based cdf; accurate to ~1e-13."""
    lo, hi = -40.0, 40.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if normal_cdf_oracle(mid) < p:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13:
            break
    return 0.5 * (lo + hi)


def chi_square_survival_oracle(x: float, nu: int) -> float:
    """Closed forms for nu in {1, 2}; adaptive quadrature otherwise."""
    if nu == 1:
        return math.erfc(math.sqrt(x / 2.0))
    if nu == 2:
        return math.exp(-x / 2.0)
    a = nu / 2.0

    def density(t):
        return math.exp((a - 1.0) * math.log(t) - t / 2.0
                        - a * math.log(2.0) - math.lgamma(a))

    tail, _ = integrate.quad(density, x, np.inf)
    return tail


def chi_square_quantile_oracle(p: float, nu: int) -> float:
    lo, hi = 0.0, 1.0
    while 1.0 - chi_square_survival_oracle(hi, nu) < p:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if 1.0 - chi_square_survival_oracle(mid, nu) < p:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


class TestStdNormalQuantile:
    def test_median_is_zero(self):
        assert std_normal_quantile(0.5) == 0.0

    def test_anchor_0975(self):
        assert std_normal_quantile(0.975) == pytest.approx(1.959964, abs=1e-6)
        assert std_normal_quantile(0.975) == pytest.approx(
            normal_quantile_oracle(0.975), abs=1e-9)

    @pytest.mark.parametrize("p", [0.01, 0.3])
    def test_antisymmetry(self, p):
        assert std_normal_quantile(p) == pytest.approx(
            -std_normal_quantile(1.0 - p), abs=1e-12)

    @pytest.mark.parametrize("p", [1e-10, 1e-6, 0.001, 0.02, 0.2, 0.5,
                                   0.8, 0.98, 0.999, 1 - 1e-6])
    def test_accuracy_against_bisection(self, p):
        assert std_normal_quantile(p) == pytest.approx(
            normal_quantile_oracle(p), abs=1e-9)

    def test_strictly_increasing(self):
        p = np.linspace(1e-6, 1.0 - 1e-6, 1000)
        values = std_normal_quantile(p)
        assert np.all(np.diff(values) > 0.0)

    def test_vectorized_matches_scalar(self):
        p = np.array([0.1, 0.5, 0.9])
        np.testing.assert_allclose(std_normal_quantile(p),
                                   [std_normal_quantile(v) for v in p],
                                   rtol=0, atol=0)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.5, 1.5])
    def test_domain(self, p):
        with pytest.raises(ValueError):
            std_normal_quantile(p)


class TestChiSquareQuantile:
    def test_one_dof_anchor(self):
        value = chi_square_quantile(0.95, 1)
        assert value == pytest.approx(3.841459, abs=1e-6)
        # one dof: quantile equals the squared two-sided normal quantile
        assert value == pytest.approx(std_normal_quantile(0.975) ** 2, abs=1e-8)

    def test_two_dof_closed_form(self):
        assert chi_square_quantile(0.95, 2) == pytest.approx(
            -2.0 * math.log(0.05), abs=1e-6)

    @pytest.mark.parametrize("p", [0.5, 0.9, 0.95, 0.99])
    def test_squared_normal_identity(self, p):
        assert chi_square_quantile(p, 1) == pytest.approx(
            std_normal_quantile((1.0 + p) / 2.0) ** 2, rel=1e-8)

    @pytest.mark.parametrize("nu", [1, 2, 5, 10])
    @pytest.mark.parametrize("p", [0.001, 0.1, 0.5, 0.9, 0.999])
    def test_against_bisection_oracle(self, p, nu):
        assert chi_square_quantile(p, nu) == pytest.approx(
            chi_square_quantile_oracle(p, nu), rel=1e-8)

    def test_domain(self):
        for bad in (0.0, 1.0, -1.0):
            with pytest.raises(ValueError):
                chi_square_quantile(bad, 2)
        with pytest.raises(ValueError):
            chi_square_quantile(0.5, 0)


class TestChiSquareSurvival:
    def test_full_mass_above_zero(self):
        for nu in (1, 3, 8):
            assert chi_square_survival(0.0, nu) == 1.0

    def test_reported_detection_pvalue(self):
        # 2 * (1 - Phi(sqrt(4.5664))) via the erf oracle
        value = chi_square_survival(4.5664, 1)
        assert value == pytest.approx(chi_square_survival_oracle(4.5664, 1),
                                      abs=1e-10)
        assert value == pytest.approx(0.0326, abs=5e-5)

    def test_two_dof_exponential_form(self):
        assert chi_square_survival(5.991465, 2) == pytest.approx(0.05, abs=1e-8)

    @pytest.mark.parametrize("nu", [1, 2, 5])
    @pytest.mark.parametrize("p", [0.5, 0.9, 0.99])
    def test_quantile_roundtrip(self, p, nu):
        x = chi_square_quantile(p, nu)
        assert chi_square_survival(x, nu) == pytest.approx(1.0 - p, abs=1e-8)

    @pytest.mark.parametrize("nu", [1, 2, 5, 11])
    @pytest.mark.parametrize("x", [0.05, 0.5, 2.0, 9.0, 30.0])
    def test_against_oracle(self, x, nu):
        assert chi_square_survival(x, nu) == pytest.approx(
            chi_square_survival_oracle(x, nu), rel=1e-8, abs=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            chi_square_survival(-0.1, 1)


class TestChiSquareType:
    def test_validation(self):
        with pytest.raises(ValueError):
            ChiSquare(0)
        with pytest.raises(ValueError):
            ChiSquare(2.5)
        with pytest.raises(ValueError):
            ChiSquare(True)

    def test_methods_delegate(self):
        d = ChiSquare(2)
        assert d.quantile(0.95) == chi_square_quantile(0.95, 2)
        assert d.survival(1.0) == chi_square_survival(1.0, 2)
