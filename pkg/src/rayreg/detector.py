"""Wald-test machinery over a fitted Rayleigh regression.

The statistic is a quadratic form in the deviation of the coefficients of
interest from their hypothesized values, weighted by the inverse of the
corresponding block of the full-model covariance.  Under the null it is
asymptotically chi-square with one degree of freedom per tested
coefficient; the detection threshold comes from a user-chosen probability
of false alarm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .regression import FitResult
from .special import chi_square_quantile, chi_square_survival

__all__ = ["HypothesisSpec", "WaldReport", "wald_statistic", "wald_test"]


@dataclass(frozen=True)
class HypothesisSpec:
    """Null hypothesis ``beta[interest_indices] == null_values``.

    ``interest_indices`` are 0-based coefficient positions; ``pfa`` is the
    probability of false alarm fixing the detection threshold.
    """

    interest_indices: tuple[int, ...]
    null_values: np.ndarray
    pfa: float

    def __post_init__(self):
        idx = tuple(int(i) for i in self.interest_indices)
        if len(idx) < 1:
            raise ValueError("at least one coefficient of interest is required")
        if len(set(idx)) != len(idx):
            raise ValueError(f"interest indices must be distinct, got {idx}")
        if any(i < 0 for i in idx):
            raise ValueError(f"interest indices must be nonnegative, got {idx}")
        null = np.atleast_1d(np.asarray(self.null_values, dtype=np.float64))
        if null.shape != (len(idx),):
            raise ValueError(
                f"{len(idx)} interest indices but {null.shape[0]} null values")
        if not 0.0 < float(self.pfa) < 1.0:
            raise ValueError("pfa must lie strictly inside (0, 1)")
        object.__setattr__(self, "interest_indices", idx)
        object.__setattr__(self, "null_values", null)
        object.__setattr__(self, "pfa", float(self.pfa))

    @property
    def dof(self) -> int:
        return len(self.interest_indices)


@dataclass(frozen=True)
class WaldReport:
    statistic: float
    dof: int
    threshold: float
    p_value: float
    reject: bool


def _check_indices(fit: FitResult, spec: HypothesisSpec) -> None:
    r = fit.n_params
    if spec.dof > r or any(i >= r for i in spec.interest_indices):
        raise ValueError(
            f"interest indices {spec.interest_indices} do not fit a model "
            f"with {r} coefficients")


def wald_statistic(fit: FitResult, spec: HypothesisSpec) -> float:
    """Quadratic form of the interest-coefficient deviations.

    The weighting matrix is the inverse of the interest block of the
    full-model covariance (the partition of the inverse information, not
    the inverse of an information partition).
    """
    if not fit.converged:
        raise ValueError("wald_statistic requires a converged fit")
    _check_indices(fit, spec)
    idx = list(spec.interest_indices)
    diff = fit.beta_hat[idx] - spec.null_values
    block = fit.covariance[np.ix_(idx, idx)]
    try:
        solved = cho_solve(cho_factor(block, lower=True), diff)
    except np.linalg.LinAlgError:
        raise np.linalg.LinAlgError(
            "covariance block of the interest coefficients is not positive "
            "definite") from None
    return float(diff @ solved)


def wald_test(fit: FitResult, spec: HypothesisSpec) -> WaldReport:
    """Full detection report: statistic, threshold, p-value, and decision."""
    statistic = wald_statistic(fit, spec)
    threshold = chi_square_quantile(1.0 - spec.pfa, spec.dof)
    p_value = chi_square_survival(statistic, spec.dof)
    return WaldReport(statistic=statistic, dof=spec.dof, threshold=threshold,
                      p_value=p_value, reject=statistic > threshold)
