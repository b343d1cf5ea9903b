"""Seeded Monte Carlo harness for estimator quality and detector calibration.

A scenario fixes the true coefficients, a design matrix (drawn once and held
fixed across replications), a sample length, and a seed.  Each replication
generates amplitudes by inversion sampling, refits the model, and the
summary reports the per-parameter mean, percentage relative bias, and mean
square error.  Per-replication randomness comes from counter-style seed
splitting (scenario seed mixed with the replication index), so results do
not depend on execution order.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import distribution
from .detector import HypothesisSpec, wald_test
from .regression import (ConvergenceError, FitOptions, LogLink,
                         RegressionDataset, fit_mle, get_link)

__all__ = [
    "ScenarioSpec",
    "McSummary",
    "run_scenario",
    "empirical_test_size",
    "relative_bias_percent",
    "read_scenario_config",
]

# Stream labels for counter-based seed splitting.
_COVARIATE_STREAM = 0
_REPLICATION_STREAM = 1

_MAX_FAILURE_FRACTION = 0.01


@dataclass(frozen=True)
class ScenarioSpec:
    """One Monte Carlo scenario.

    ``covariates`` is either the string ``"uniform01"`` (intercept column
    plus uniform(0,1) draws, generated once from the scenario seed) or an
    explicit (N, r) design matrix used as-is.
    """

    true_beta: np.ndarray
    n_obs: int
    replications: int
    seed: int
    covariates: object = "uniform01"
    link: object = LogLink()

    def __post_init__(self):
        beta = np.atleast_1d(np.asarray(self.true_beta, dtype=np.float64))
        if beta.ndim != 1 or beta.size < 1:
            raise ValueError("true_beta must be a nonempty vector")
        object.__setattr__(self, "true_beta", beta)
        if int(self.n_obs) <= beta.size:
            raise ValueError(
                f"n_obs must exceed the parameter count, got N={self.n_obs}, "
                f"r={beta.size}")
        if int(self.replications) < 1:
            raise ValueError("replications must be >= 1")
        object.__setattr__(self, "n_obs", int(self.n_obs))
        object.__setattr__(self, "replications", int(self.replications))
        object.__setattr__(self, "seed", int(self.seed))
        if isinstance(self.covariates, str):
            if self.covariates != "uniform01":
                raise ValueError(
                    f"unknown covariate source {self.covariates!r}; expected "
                    f"'uniform01' or an explicit matrix")
        else:
            x = np.asarray(self.covariates, dtype=np.float64)
            if x.shape != (self.n_obs, beta.size):
                raise ValueError(
                    f"fixed covariate matrix must have shape "
                    f"({self.n_obs}, {beta.size}), got {x.shape}")
            object.__setattr__(self, "covariates", x)

    @property
    def n_params(self) -> int:
        return self.true_beta.size


@dataclass(frozen=True)
class McSummary:
    """Per-parameter estimator summary over the converged replications."""

    mean: np.ndarray
    rb_percent: np.ndarray
    mse: np.ndarray
    replications_used: int
    failures: int

    def to_dict(self) -> dict:
        return {
            "mean": [float(v) for v in self.mean],
            "rb_percent": [float(v) for v in self.rb_percent],
            "mse": [float(v) for v in self.mse],
            "replications_used": self.replications_used,
            "failures": self.failures,
        }

    def to_csv(self) -> str:
        """Measures-by-parameters table: one row per measure."""
        r = self.mean.shape[0]
        header = "measure," + ",".join(f"beta_{i + 1}" for i in range(r))
        rows = [header]
        for name, values in (("mean", self.mean),
                             ("rb_percent", self.rb_percent),
                             ("mse", self.mse)):
            rows.append(name + "," + ",".join(f"{v:.15g}" for v in values))
        return "\n".join(rows) + "\n"


def relative_bias_percent(true_value: float, estimate_mean: float) -> float:
    """Percentage relative bias, (true - mean) / true * 100."""
    return (true_value - estimate_mean) / true_value * 100.0


def _replication_rng(seed: int, index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(_REPLICATION_STREAM, index))
    return np.random.default_rng(ss)


def scenario_design(spec: ScenarioSpec) -> np.ndarray:
    """The design matrix shared by every replication of the scenario."""
    if isinstance(spec.covariates, str):
        rng = np.random.default_rng(
            np.random.SeedSequence(spec.seed, spawn_key=(_COVARIATE_STREAM,)))
        x = np.empty((spec.n_obs, spec.n_params))
        x[:, 0] = 1.0
        x[:, 1:] = rng.random((spec.n_obs, spec.n_params - 1))
        return x
    return np.array(spec.covariates)


def _replicate(spec: ScenarioSpec, options: FitOptions | None, extract):
    """Run every replication, applying ``extract`` to each converged fit."""
    x = scenario_design(spec)
    mu = spec.link.inverse(x @ spec.true_beta)
    if not np.all(np.isfinite(mu) & (mu > 0.0)):
        raise ValueError("true coefficients give nonpositive means on this design")
    values = []
    failures = 0
    for rep in range(spec.replications):
        rng = _replication_rng(spec.seed, rep)
        y = distribution.sample(mu, rng)
        fit = fit_mle(RegressionDataset(y, x), spec.link, options)
        if not fit.converged:
            failures += 1
            continue
        values.append(extract(fit))
    if failures > _MAX_FAILURE_FRACTION * spec.replications:
        raise ConvergenceError(
            f"{failures} of {spec.replications} replications failed to "
            f"converge (cap is {_MAX_FAILURE_FRACTION:.0%})")
    return values, failures


def run_scenario(spec: ScenarioSpec, options: FitOptions | None = None) -> McSummary:
    """Generate-fit-summarize over all replications of one scenario.

    Replications whose fit does not converge are excluded from the summary
    and counted in ``failures``; the run errors out if more than 1% fail.
    """
    kept, failures = _replicate(spec, options, lambda fit: fit.beta_hat)
    estimates = np.asarray(kept)
    mean = estimates.mean(axis=0)
    rb = (spec.true_beta - mean) / spec.true_beta * 100.0
    mse = np.mean((estimates - spec.true_beta) ** 2, axis=0)
    return McSummary(mean=mean, rb_percent=rb, mse=mse,
                     replications_used=estimates.shape[0], failures=failures)


def empirical_test_size(spec: ScenarioSpec, hypothesis: HypothesisSpec,
                        options: FitOptions | None = None) -> float:
    """Fraction of replications in which the Wald test rejects.

    The scenario's true coefficients must satisfy the null hypothesis, so
    the returned fraction estimates the detector's size at the requested
    probability of false alarm.
    """
    idx = list(hypothesis.interest_indices)
    if any(i >= spec.n_params for i in idx):
        raise ValueError("hypothesis indices exceed the scenario dimension")
    if not np.allclose(spec.true_beta[idx], hypothesis.null_values):
        raise ValueError(
            "scenario coefficients do not satisfy the null hypothesis; the "
            "rejection rate would estimate power, not size")
    rejects, _ = _replicate(spec, options,
                            lambda fit: wald_test(fit, hypothesis).reject)
    return sum(rejects) / len(rejects)


def read_scenario_config(path) -> ScenarioSpec:
    """Parse a plain ``key = value`` scenario file.

    Recognized keys: ``beta`` (comma-separated reals), ``N``,
    ``replications``, ``seed``, ``link`` (default ``log``), ``covariates``
    (``uniform01`` or a CSV path, resolved relative to the config file,
    holding the full N-by-r design).  Lines starting with ``#`` are
    comments.
    """
    path = Path(path)
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ValueError(f"{path}:{lineno}: empty key or value")
        if key in entries:
            raise ValueError(f"{path}:{lineno}: duplicate key {key!r}")
        entries[key] = value

    required = {"beta", "N", "replications", "seed"}
    missing = sorted(required - entries.keys())
    if missing:
        raise ValueError(f"{path}: missing required keys: {', '.join(missing)}")
    known = required | {"link", "covariates"}
    unknown = sorted(entries.keys() - known)
    if unknown:
        raise ValueError(f"{path}: unknown keys: {', '.join(unknown)}")

    try:
        beta = [float(part) for part in entries["beta"].split(",")]
    except ValueError:
        raise ValueError(f"{path}: beta must be comma-separated reals") from None
    try:
        n_obs = int(entries["N"])
        replications = int(entries["replications"])
        seed = int(entries["seed"])
    except ValueError:
        raise ValueError(f"{path}: N, replications, and seed must be integers") from None

    link = get_link(entries.get("link", "log"))
    covariates: object = entries.get("covariates", "uniform01")
    if covariates != "uniform01":
        csv_path = Path(covariates)
        if not csv_path.is_absolute():
            csv_path = path.parent / csv_path
        covariates = np.loadtxt(csv_path, delimiter=",", ndmin=2)

    return ScenarioSpec(true_beta=np.asarray(beta), n_obs=n_obs,
                        replications=replications, seed=seed,
                        covariates=covariates, link=link)
