"""Goodness-of-fit tooling for fitted Rayleigh regressions.

Quantile residuals (normal quantile of the fitted cdf at each observation),
the likelihood-ratio generalized R-squared against the intercept-only null
model, asymptotic standard errors, and normal-theory confidence intervals.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from . import distribution
from .regression import (ConvergenceError, FitResult, LogLink,
                         RegressionDataset, fit_mle)
from .special import std_normal_quantile

__all__ = [
    "ResidualSeries",
    "quantile_residuals",
    "r_squared",
    "standard_errors",
    "confidence_intervals",
]

# Fitted cdf values are clamped into [EPS, 1 - EPS] before the normal
# quantile so residuals stay finite; the perturbation is below noise level.
_CDF_CLAMP = 1e-15


@dataclass(frozen=True)
class ResidualSeries:
    """Quantile residuals, one per observation, in observation order."""

    values: np.ndarray

    @property
    def index(self) -> np.ndarray:
        """1-based observation index accompanying ``values``."""
        return np.arange(1, self.values.shape[0] + 1)

    def to_csv(self, path_or_buffer) -> None:
        """Write the two-column (index, residual) CSV used for plotting."""
        if isinstance(path_or_buffer, (str, bytes)) or hasattr(path_or_buffer, "__fspath__"):
            with open(path_or_buffer, "w", encoding="utf-8") as handle:
                self.to_csv(handle)
            return
        buf: io.TextIOBase = path_or_buffer
        buf.write("index,residual\n")
        for i, r in zip(self.index, self.values):
            buf.write(f"{i},{r:.15g}\n")

    def summary(self) -> dict:
        v = self.values
        return {
            "mean": float(np.mean(v)),
            "variance": float(np.var(v, ddof=1)),
            "max_abs": float(np.max(np.abs(v))),
        }


def quantile_residuals(fit: FitResult, data: RegressionDataset) -> ResidualSeries:
    """Normal quantile of the fitted cdf at each observation.

    Under a well-specified model the residuals are approximately standard
    normal.  The cdf values are clamped away from {0, 1} so extreme
    observations map to large finite residuals instead of infinities.
    """
    u = distribution.cdf(data.y, fit.mu_hat)
    u = np.clip(u, _CDF_CLAMP, 1.0 - _CDF_CLAMP)
    return ResidualSeries(values=np.asarray(std_normal_quantile(u)))


def r_squared(fit: FitResult, data: RegressionDataset, link=LogLink()) -> float:
    """Likelihood-based generalized coefficient of determination.

    ``1 - exp(-(2/N) * (loglik(fit) - loglik(null)))`` where the null model
    is the intercept-only fit under the same link.  Lies in [0, 1] whenever
    the fitted design nests the intercept.
    """
    if not fit.converged:
        raise ConvergenceError("r_squared requires a converged fit")
    n = data.n_obs
    null_data = RegressionDataset(data.y, np.ones((n, 1)))
    null_fit = fit_mle(null_data, link)
    if not null_fit.converged:
        raise ConvergenceError("intercept-only null model failed to converge")
    r2 = -np.expm1(-2.0 / n * (fit.log_likelihood - null_fit.log_likelihood))
    if -1e-8 < r2 < 0.0:
        r2 = 0.0  # rounding guard when the fit is itself intercept-only
    return float(r2)


def standard_errors(fit: FitResult) -> np.ndarray:
    """Asymptotic standard errors: sqrt of the covariance diagonal."""
    return np.sqrt(np.diag(fit.covariance))


def confidence_intervals(fit: FitResult, level: float) -> np.ndarray:
    """Normal-theory intervals ``beta_hat +- z * SE``, one row per coefficient.

    ``level`` is the two-sided coverage, e.g. 0.95.
    """
    level = float(level)
    if not 0.0 < level < 1.0:
        raise ValueError("confidence level must lie strictly inside (0, 1)")
    z = std_normal_quantile(1.0 - (1.0 - level) / 2.0)
    half = z * standard_errors(fit)
    return np.column_stack((fit.beta_hat - half, fit.beta_hat + half))
