"""Rayleigh regression for nonnegative amplitude signals.

A regression model in which independent Rayleigh-distributed amplitudes are
parametrized by their mean, the mean follows a link-transformed linear
predictor, and estimation is by maximum likelihood.  The package bundles
the mean-parametrized distribution, the fitter with analytic score and
Fisher information, goodness-of-fit diagnostics, a Wald-test detector for
region contrasts (the SAR change-detection use case), and a reproducible
Monte Carlo harness for estimator quality studies.
"""

from .distribution import RayleighMean, cdf, log_pdf, moments, pdf, quantile, sample
from .special import (ChiSquare, chi_square_quantile, chi_square_survival,
                      std_normal_quantile)
from .optim import OptimResult, minimize_bfgs
from .regression import (ConvergenceError, FitOptions, FitResult, LogLink,
                         RegressionDataset, fisher_information, fit_mle,
                         fitted_means, get_link, log_likelihood, ols_init,
                         score)
from .diagnostics import (ResidualSeries, confidence_intervals,
                          quantile_residuals, r_squared, standard_errors)
from .detector import HypothesisSpec, WaldReport, wald_statistic, wald_test
from .montecarlo import (McSummary, ScenarioSpec, empirical_test_size,
                         read_scenario_config, relative_bias_percent,
                         run_scenario, scenario_design)
from .sar import (DetectionReport, GaussianBaselineReport, RegionDesign,
                  RegionImage, build_design, detect_regions,
                  gaussian_baseline, load_region_image, simulate_region_image)

__version__ = "0.1.0"

__all__ = [
    "RayleighMean", "pdf", "log_pdf", "cdf", "quantile", "sample", "moments",
    "ChiSquare", "std_normal_quantile", "chi_square_quantile",
    "chi_square_survival",
    "OptimResult", "minimize_bfgs",
    "ConvergenceError", "LogLink", "get_link", "RegressionDataset",
    "FitOptions", "FitResult", "log_likelihood", "score",
    "fisher_information", "ols_init", "fit_mle", "fitted_means",
    "ResidualSeries", "quantile_residuals", "r_squared", "standard_errors",
    "confidence_intervals",
    "HypothesisSpec", "WaldReport", "wald_statistic", "wald_test",
    "ScenarioSpec", "McSummary", "run_scenario", "empirical_test_size",
    "relative_bias_percent", "read_scenario_config", "scenario_design",
    "RegionImage", "RegionDesign", "DetectionReport",
    "GaussianBaselineReport", "load_region_image", "build_design",
    "detect_regions", "gaussian_baseline", "simulate_region_image",
    "__version__",
]
