"""Mean-parametrized Rayleigh distribution.

The classical Rayleigh density is governed by a scale parameter sigma; here
it is reparametrized by its mean ``mu = sigma * sqrt(pi/2)``, which is the
quantity a regression structure models directly.  The module provides the
density, log-density, cdf, quantile, inversion sampling, and moments, both
as broadcasting module-level functions and through the thin
:class:`RayleighMean` wrapper.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "RayleighMean",
    "pdf",
    "log_pdf",
    "cdf",
    "quantile",
    "sample",
    "moments",
]

_LOG_HALF_PI = np.log(np.pi / 2.0)


def _check_mean(mean) -> np.ndarray:
    mean = np.asarray(mean, dtype=np.float64)
    if not np.all(np.isfinite(mean) & (mean > 0.0)):
        raise ValueError("mean must be positive and finite")
    return mean


def pdf(y, mean):
    """Density (pi*y / (2*mean**2)) * exp(-pi*y**2 / (4*mean**2)) on y >= 0."""
    mean = _check_mean(mean)
    y = np.asarray(y, dtype=np.float64)
    if not np.all((y >= 0.0) & ~np.isnan(y)) or np.any(np.isinf(y)):
        raise ValueError("pdf requires finite y >= 0")
    z = y / mean
    out = (np.pi * y / (2.0 * mean ** 2)) * np.exp(-0.25 * np.pi * z * z)
    return float(out) if out.ndim == 0 else out


def log_pdf(y, mean):
    """Log-density; defined for y > 0 only (the density vanishes at y = 0)."""
    mean = _check_mean(mean)
    y = np.asarray(y, dtype=np.float64)
    if not np.all(np.isfinite(y) & (y > 0.0)):
        raise ValueError("log_pdf requires finite y > 0")
    z = y / mean
    out = _LOG_HALF_PI + np.log(y) - 2.0 * np.log(mean) - 0.25 * np.pi * z * z
    return float(out) if out.ndim == 0 else out


def cdf(y, mean):
    """Distribution function 1 - exp(-pi*y**2 / (4*mean**2)) on y >= 0."""
    mean = _check_mean(mean)
    y = np.asarray(y, dtype=np.float64)
    if not np.all(y >= 0.0):
        raise ValueError("cdf requires y >= 0")
    z = y / mean
    out = -np.expm1(-0.25 * np.pi * z * z)
    return float(out) if out.ndim == 0 else out


def quantile(u, mean):
    """Inverse cdf 2*mean*sqrt(-log(1-u)/pi) for u in [0, 1).

    The complement log is evaluated via log1p so small-u quantiles keep
    full precision.
    """
    mean = _check_mean(mean)
    u = np.asarray(u, dtype=np.float64)
    if not np.all((u >= 0.0) & (u < 1.0)):
        raise ValueError("quantile requires 0 <= u < 1")
    out = 2.0 * mean * np.sqrt(-np.log1p(-u) / np.pi)
    return float(out) if out.ndim == 0 else out


def sample(mean, rng: np.random.Generator, size=None):
    """Draw from the distribution by inversion of the cdf.

    Parameters
    ----------
    mean : float or array_like
        Distribution mean(s).  An array yields one draw per entry.
    rng : numpy.random.Generator
        Source of uniforms in [0, 1).
    size : int or tuple, optional
        Number of draws for a scalar ``mean``; incompatible with an array
        ``mean``, whose shape fixes the output.

    Returns
    -------
    float or ndarray
        Strictly positive draws: the zero-probability u = 0 draws are
        redrawn rather than clamped, so outputs always satisfy the y > 0
        domain of :func:`log_pdf`.
    """
    mean = _check_mean(mean)
    if mean.ndim > 0:
        if size is not None:
            raise ValueError("size is only valid for a scalar mean")
        shape = mean.shape
    else:
        shape = size

    u = rng.random(shape)
    y = 2.0 * mean * np.sqrt(-np.log1p(-u) / np.pi)
    if shape is None:
        while y <= 0.0:
            y = 2.0 * mean * np.sqrt(-np.log1p(-rng.random()) / np.pi)
        return float(y)
    zero = y <= 0.0
    while np.any(zero):
        redraw = rng.random(int(zero.sum()))
        mean_at = mean[zero] if mean.ndim > 0 else mean
        y[zero] = 2.0 * mean_at * np.sqrt(-np.log1p(-redraw) / np.pi)
        zero = y <= 0.0
    return y


def moments(mean):
    """Return (mean, variance); the variance is mean**2 * (4/pi - 1)."""
    mean = _check_mean(mean)
    var = mean ** 2 * (4.0 / np.pi - 1.0)
    if mean.ndim == 0:
        return float(mean), float(var)
    return mean, var


@dataclass(frozen=True)
class RayleighMean:
    """Rayleigh distribution carrying its mean ``mean > 0``.

    The classical scale parameter is recovered as
    ``sigma = mean * sqrt(2/pi)`` but is not stored separately.
    """

    mean: float

    def __post_init__(self):
        m = float(self.mean)
        if not (np.isfinite(m) and m > 0.0):
            raise ValueError(f"mean must be positive and finite, got {self.mean!r}")
        object.__setattr__(self, "mean", m)

    def pdf(self, y):
        return pdf(y, self.mean)

    def log_pdf(self, y):
        return log_pdf(y, self.mean)

    def cdf(self, y):
        return cdf(y, self.mean)

    def quantile(self, u):
        return quantile(u, self.mean)

    def sample(self, rng: np.random.Generator, size=None):
        return sample(self.mean, rng, size=size)

    def moments(self):
        return moments(self.mean)
