"""Rayleigh regression: data model, link, likelihood machinery, and fitter.

The response amplitudes ``y[n]`` are independent mean-parametrized Rayleigh
draws whose means follow ``g(mu[n]) = x[n]' beta`` for a strictly monotone,
twice differentiable link ``g``.  Estimation is by maximum likelihood:
negated log-likelihood minimized with BFGS from an ordinary-least-squares
start on the transformed responses ``g(y)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from . import distribution
from .optim import minimize_bfgs

__all__ = [
    "ConvergenceError",
    "LogLink",
    "get_link",
    "RegressionDataset",
    "FitOptions",
    "FitResult",
    "log_likelihood",
    "score",
    "fisher_information",
    "ols_init",
    "fit_mle",
    "fitted_means",
]


class ConvergenceError(RuntimeError):
    """Raised when an operation requires a converged fit and none is available."""


@dataclass(frozen=True)
class LogLink:
    """Log link: eta = log(mu), mu = exp(eta), valid on mu > 0."""

    name: ClassVar[str] = "log"

    def __call__(self, mu):
        return np.log(mu)

    def inverse(self, eta):
        return np.exp(eta)

    def deriv(self, mu):
        """g'(mu); its reciprocal is d mu / d eta."""
        return 1.0 / np.asarray(mu, dtype=np.float64)


_LINKS = {"log": LogLink}


def get_link(name: str):
    try:
        return _LINKS[name]()
    except KeyError:
        known = ", ".join(sorted(_LINKS))
        raise ValueError(f"unknown link {name!r}; available links: {known}") from None


class RegressionDataset:
    """Immutable response vector and design matrix pair.

    Parameters
    ----------
    y : array_like, shape (N,)
        Strictly positive, finite amplitudes.
    X : array_like, shape (N, r)
        Full design matrix with N > r >= 1 and full column rank; include a
        leading column of ones yourself when an intercept is wanted.
    """

    def __init__(self, y, X):
        y = np.ascontiguousarray(y, dtype=np.float64)
        X = np.ascontiguousarray(X, dtype=np.float64)
        if y.ndim != 1:
            raise ValueError("y must be one-dimensional")
        if X.ndim != 2:
            raise ValueError("X must be two-dimensional")
        if X.shape[0] != y.shape[0]:
            raise ValueError(
                f"y has {y.shape[0]} rows but X has {X.shape[0]}")
        n, r = X.shape
        if r < 1 or n <= r:
            raise ValueError(
                f"need more observations than covariates, got N={n}, r={r}")
        bad = ~(np.isfinite(y) & (y > 0.0))
        if np.any(bad):
            i = int(np.argmax(bad))
            raise ValueError(
                f"y[{i}] = {y[i]!r} is not a strictly positive finite amplitude")
        if not np.all(np.isfinite(X)):
            raise ValueError("X contains non-finite entries")
        # Full-rank check through the same factorization ols_init uses.
        try:
            np.linalg.cholesky(X.T @ X)
        except np.linalg.LinAlgError:
            raise ValueError("X is rank deficient (X'X has no Cholesky factor)") from None
        y.setflags(write=False)
        X.setflags(write=False)
        self.y = y
        self.X = X

    @property
    def n_obs(self) -> int:
        return self.y.shape[0]

    @property
    def n_params(self) -> int:
        return self.X.shape[1]

    def __repr__(self) -> str:
        return f"RegressionDataset(N={self.n_obs}, r={self.n_params})"


@dataclass(frozen=True)
class FitOptions:
    grad_tol: float = 1e-8
    step_tol: float = 1e-10
    max_iter: int = 500


@dataclass(frozen=True)
class FitResult:
    """Maximum-likelihood fit of the Rayleigh regression model.

    ``covariance`` is the inverse Fisher information at the optimum (the
    asymptotic covariance of the estimates), not the BFGS approximation.
    ``log_likelihood_path`` holds the log-likelihood at each accepted
    optimizer iterate and is nondecreasing.
    """

    beta_hat: np.ndarray
    covariance: np.ndarray
    log_likelihood: float
    mu_hat: np.ndarray
    converged: bool
    iterations: int
    gradient_norm: float
    message: str = ""
    log_likelihood_path: np.ndarray = field(default_factory=lambda: np.empty(0))

    @property
    def n_params(self) -> int:
        return self.beta_hat.shape[0]


def _mu_from(beta, data: RegressionDataset, link) -> np.ndarray:
    with np.errstate(over="ignore", invalid="ignore"):
        return link.inverse(data.X @ np.asarray(beta, dtype=np.float64))


def _feasible(mu: np.ndarray) -> bool:
    return bool(np.all(np.isfinite(mu) & (mu > 0.0)))


def log_likelihood(beta, data: RegressionDataset, link=LogLink()) -> float:
    """Sum of log-densities at mu = g^{-1}(X beta); -inf when infeasible."""
    mu = _mu_from(beta, data, link)
    if not _feasible(mu):
        return -np.inf
    return float(np.sum(distribution.log_pdf(data.y, mu)))


def score(beta, data: RegressionDataset, link=LogLink()) -> np.ndarray:
    """Analytic gradient of the log-likelihood, X' T v in matrix form.

    Here v[n] = pi*y[n]**2 / (2*mu[n]**3) - 2/mu[n] is the derivative of
    the per-observation log-density in mu, and T = diag{1/g'(mu[n])} maps
    it onto the linear-predictor scale.
    """
    mu = _mu_from(beta, data, link)
    if not _feasible(mu):
        return np.full(data.n_params, np.nan)
    y = data.y
    v = 0.5 * np.pi * y * y / mu ** 3 - 2.0 / mu
    t = 1.0 / link.deriv(mu)
    return data.X.T @ (t * v)


def fisher_information(beta, data: RegressionDataset, link=LogLink()) -> np.ndarray:
    """Expected information X' W X with W = diag{(4/mu**2) (dmu/deta)**2}.

    Under the log link dmu/deta = mu cancels the 4/mu**2 factor exactly, so
    the result is 4 X'X at every beta.
    """
    mu = _mu_from(beta, data, link)
    if not _feasible(mu):
        raise ValueError("linear predictor leaves the positive mean domain")
    dmu_deta = 1.0 / link.deriv(mu)
    w = 4.0 / mu ** 2 * dmu_deta ** 2
    return (data.X * w[:, None]).T @ data.X


def ols_init(data: RegressionDataset, link=LogLink()) -> np.ndarray:
    """Least-squares coefficients of g(y) on X, the fitter's starting point."""
    xtx = data.X.T @ data.X
    xtz = data.X.T @ link(data.y)
    try:
        return cho_solve(cho_factor(xtx, lower=True), xtz)
    except np.linalg.LinAlgError:
        raise ValueError("normal equations are singular; X is rank deficient") from None


def fit_mle(data: RegressionDataset, link=LogLink(),
            options: FitOptions | None = None) -> FitResult:
    """Maximize the log-likelihood with BFGS from the least-squares start.

    Non-convergence is reported through ``converged=False`` together with
    the iteration count and final gradient norm; no exception is raised.
    The returned covariance is the inverse analytic Fisher information at
    the final iterate.
    """
    opts = options or FitOptions()

    def negative_loglik(beta):
        return -log_likelihood(beta, data, link)

    def negative_score(beta):
        return -score(beta, data, link)

    start = ols_init(data, link)
    if not np.isfinite(negative_loglik(start)):
        # The OLS start can overflow the inverse link for extreme responses;
        # the zero vector maps to mu = 1 and is always feasible for the log link.
        start = np.zeros(data.n_params)

    res = minimize_bfgs(negative_loglik, negative_score, start,
                        grad_tol=opts.grad_tol, step_tol=opts.step_tol,
                        max_iter=opts.max_iter)

    fisher = fisher_information(res.x, data, link)
    try:
        covariance = cho_solve(cho_factor(fisher, lower=True),
                               np.eye(data.n_params))
    except np.linalg.LinAlgError:
        covariance = np.full((data.n_params, data.n_params), np.nan)
    covariance = 0.5 * (covariance + covariance.T)

    return FitResult(
        beta_hat=res.x,
        covariance=covariance,
        log_likelihood=-res.fun,
        mu_hat=_mu_from(res.x, data, link),
        converged=res.converged,
        iterations=res.iterations,
        gradient_norm=res.gradient_norm,
        message=res.message,
        log_likelihood_path=-np.asarray(res.history),
    )


def fitted_means(fit: FitResult, data: RegressionDataset, link=LogLink()) -> np.ndarray:
    """Elementwise g^{-1}(X beta_hat); the MLE of mu by invariance."""
    return link.inverse(data.X @ fit.beta_hat)
