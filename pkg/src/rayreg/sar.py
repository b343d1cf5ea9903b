"""Region detection on amplitude images via dummy-variable regression.

An amplitude grid and an integer region-label mask (0 marks unused pixels)
are flattened in row-major pixel order into a regression dataset: intercept
plus one binary dummy per non-baseline region.  Fitting the Rayleigh model
and Wald-testing each dummy against zero decides whether the corresponding
region's mean amplitude differs from the baseline region's.  An ordinary
least-squares fit of the raw amplitudes provides a Gaussian comparison
baseline.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import stats

from . import distribution
from .detector import HypothesisSpec, wald_test
from .diagnostics import (ResidualSeries, quantile_residuals, r_squared,
                          standard_errors)
from .regression import (ConvergenceError, LogLink, RegressionDataset,
                         fit_mle)

__all__ = [
    "RegionImage",
    "RegionDesign",
    "DetectionReport",
    "GaussianBaselineReport",
    "load_region_image",
    "build_design",
    "detect_regions",
    "gaussian_baseline",
    "simulate_region_image",
]


@dataclass(frozen=True)
class RegionImage:
    """Amplitude grid plus integer region labels of the same shape.

    Label 0 marks pixels outside every region; labels >= 1 identify
    regions.  Every labeled pixel must carry a strictly positive amplitude.
    """

    amplitudes: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=np.float64)
        lab = np.asarray(self.labels)
        if amp.ndim != 2 or lab.ndim != 2:
            raise ValueError("amplitude and label grids must be two-dimensional")
        if amp.shape != lab.shape:
            raise ValueError(
                f"amplitude grid is {amp.shape} but mask is {lab.shape}")
        if not np.issubdtype(lab.dtype, np.integer):
            if not np.all(lab == np.round(lab)):
                raise ValueError("mask labels must be integers")
            lab = lab.astype(np.int64)
        if np.any(lab < 0):
            bad = np.argwhere(lab < 0)[0]
            raise ValueError(
                f"mask labels must be nonnegative; pixel (row {bad[0]}, "
                f"col {bad[1]}) has label {lab[tuple(bad)]}")
        if not np.all(np.isfinite(amp)):
            bad = np.argwhere(~np.isfinite(amp))[0]
            raise ValueError(
                f"amplitude at (row {bad[0]}, col {bad[1]}) is not finite")
        region_ids = np.unique(lab[lab > 0])
        if region_ids.size == 0:
            raise ValueError("no labeled regions in the mask")
        if region_ids.size < 2:
            raise ValueError(
                f"need at least two labeled regions, found only {region_ids[0]}")
        zero_amp = (lab > 0) & ~(amp > 0.0)
        if np.any(zero_amp):
            bad = np.argwhere(zero_amp)[0]
            raise ValueError(
                f"labeled pixel (row {bad[0]}, col {bad[1]}) has nonpositive "
                f"amplitude {amp[tuple(bad)]!r}")
        amp.setflags(write=False)
        lab.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)
        object.__setattr__(self, "labels", lab)

    @property
    def region_ids(self) -> np.ndarray:
        return np.unique(self.labels[self.labels > 0])


@dataclass(frozen=True)
class RegionDesign:
    """Dummy-variable dataset built from a region image.

    Column 0 of the design is the intercept; ``dummy_map`` pairs each
    non-baseline region label with its design column, labels ascending.
    """

    dataset: RegressionDataset
    baseline_label: int
    dummy_map: tuple[tuple[int, int], ...]


def _read_csv_grid(path: Path, kind: str, cast):
    rows = []
    width = None
    text = path.read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        cells = line.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise ValueError(
                f"{path}: row {lineno} has {len(cells)} cells, expected {width}")
        parsed = []
        for col, cell in enumerate(cells, 1):
            try:
                parsed.append(cast(cell.strip()))
            except ValueError:
                raise ValueError(
                    f"{path}: malformed {kind} cell at row {lineno}, "
                    f"column {col}: {cell.strip()!r}") from None
        rows.append(parsed)
    if not rows:
        raise ValueError(f"{path}: empty {kind} grid")
    return np.asarray(rows)


def _read_pgm(path: Path) -> np.ndarray:
    """Binary (P5) PGM, 8- or 16-bit; values are rescaled to [0, 1]."""
    data = path.read_bytes()
    if not data.startswith(b"P5"):
        raise ValueError(f"{path}: not a binary PGM file (missing P5 magic)")
    # Header: magic, width, height, maxval as whitespace-separated tokens,
    # with '#' comments running to end of line.
    tokens: list[int] = []
    pos = 2
    while len(tokens) < 3:
        if pos >= len(data):
            raise ValueError(f"{path}: truncated PGM header")
        ch = data[pos:pos + 1]
        if ch == b"#":
            nl = data.find(b"\n", pos)
            pos = len(data) if nl < 0 else nl + 1
        elif ch.isspace():
            pos += 1
        else:
            end = pos
            while end < len(data) and not data[end:end + 1].isspace():
                end += 1
            token = data[pos:end]
            try:
                tokens.append(int(token))
            except ValueError:
                raise ValueError(f"{path}: bad PGM header token {token!r}") from None
            pos = end
    pos += 1  # single whitespace byte separates header from raster
    width, height, maxval = tokens
    if width < 1 or height < 1:
        raise ValueError(f"{path}: bad PGM dimensions {width}x{height}")
    if not 0 < maxval < 65536:
        raise ValueError(f"{path}: PGM maxval {maxval} out of range")
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    expected = width * height * dtype.itemsize
    raster = data[pos:pos + expected]
    if len(raster) != expected:
        raise ValueError(
            f"{path}: PGM raster holds {len(raster)} bytes, expected {expected}")
    grid = np.frombuffer(raster, dtype=dtype).reshape(height, width)
    return grid.astype(np.float64) / maxval


def load_region_image(amplitude_path, mask_path) -> RegionImage:
    """Read and validate an amplitude grid (CSV or binary PGM) and a CSV mask."""
    amplitude_path = Path(amplitude_path)
    mask_path = Path(mask_path)
    if amplitude_path.suffix.lower() == ".pgm":
        amplitudes = _read_pgm(amplitude_path)
    else:
        amplitudes = _read_csv_grid(amplitude_path, "amplitude", float)
    labels = _read_csv_grid(mask_path, "mask", int)
    return RegionImage(amplitudes=amplitudes, labels=labels)


def build_design(image: RegionImage, baseline_label: int) -> RegionDesign:
    """Intercept-plus-dummies design over the labeled pixels.

    Pixels enter in row-major grid order.  Each non-baseline label, taken
    ascending, gets a binary column that is one exactly on its pixels;
    baseline pixels have every dummy zero.
    """
    baseline_label = int(baseline_label)
    region_ids = image.region_ids
    if baseline_label not in region_ids:
        raise ValueError(
            f"baseline label {baseline_label} does not occur in the mask "
            f"(regions present: {', '.join(map(str, region_ids))})")
    flat_labels = image.labels.ravel()
    flat_amp = image.amplitudes.ravel()
    keep = flat_labels > 0
    y = flat_amp[keep]
    pixel_labels = flat_labels[keep]
    others = [int(k) for k in region_ids if k != baseline_label]
    x = np.ones((y.shape[0], 1 + len(others)))
    dummy_map = []
    for j, label in enumerate(others, start=1):
        x[:, j] = pixel_labels == label
        dummy_map.append((label, j))
    return RegionDesign(dataset=RegressionDataset(y, x),
                        baseline_label=baseline_label,
                        dummy_map=tuple(dummy_map))


@dataclass(frozen=True)
class DetectionReport:
    """Rayleigh-model detection results for every non-baseline region."""

    coefficients: np.ndarray
    standard_errors: np.ndarray
    baseline_label: int
    dummy_map: tuple[tuple[int, int], ...]
    pfa: float
    wald_statistics: dict[int, float]
    p_values: dict[int, float]
    thresholds: dict[int, float]
    rejects: dict[int, bool]
    region_effects: dict[int, float]
    r_squared: float
    residuals: ResidualSeries
    log_likelihood: float
    converged: bool

    def to_dict(self) -> dict:
        """JSON-ready payload (residual series stays out; see ``residuals``)."""
        as_str = lambda d: {str(k): v for k, v in d.items()}
        return {
            "converged": self.converged,
            "coefficients": [float(v) for v in self.coefficients],
            "standard_errors": [float(v) for v in self.standard_errors],
            "baseline_label": self.baseline_label,
            "dummy_columns": {str(label): col for label, col in self.dummy_map},
            "pfa": self.pfa,
            "wald_statistics": as_str(self.wald_statistics),
            "p_values": as_str(self.p_values),
            "thresholds": as_str(self.thresholds),
            "rejects": as_str(self.rejects),
            "region_effects": as_str(self.region_effects),
            "r_squared": self.r_squared,
            "log_likelihood": self.log_likelihood,
            "n_pixels": int(self.residuals.values.shape[0]),
            "residual_summary": self.residuals.summary(),
        }


def detect_regions(image: RegionImage, baseline_label: int,
                   pfa: float) -> DetectionReport:
    """Fit the Rayleigh model on the dummy design and Wald-test each dummy.

    Each non-baseline region is tested against a zero mean-contrast with
    one degree of freedom at the requested probability of false alarm.
    ``region_effects`` reports ``exp(coef) - 1``, the relative change of a
    region's mean amplitude versus the baseline region.
    """
    if not 0.0 < float(pfa) < 1.0:
        raise ValueError("pfa must lie strictly inside (0, 1)")
    design = build_design(image, baseline_label)
    link = LogLink()
    fit = fit_mle(design.dataset, link)
    if not fit.converged:
        raise ConvergenceError(
            f"region fit did not converge after {fit.iterations} iterations "
            f"(gradient norm {fit.gradient_norm:.3g})")

    stats_, pvals, thresholds, rejects, effects = {}, {}, {}, {}, {}
    for label, col in design.dummy_map:
        report = wald_test(fit, HypothesisSpec((col,), np.zeros(1), pfa))
        stats_[label] = report.statistic
        pvals[label] = report.p_value
        thresholds[label] = report.threshold
        rejects[label] = report.reject
        effects[label] = float(np.expm1(fit.beta_hat[col]))

    return DetectionReport(
        coefficients=fit.beta_hat,
        standard_errors=standard_errors(fit),
        baseline_label=int(baseline_label),
        dummy_map=design.dummy_map,
        pfa=float(pfa),
        wald_statistics=stats_,
        p_values=pvals,
        thresholds=thresholds,
        rejects=rejects,
        region_effects=effects,
        r_squared=r_squared(fit, design.dataset, link),
        residuals=quantile_residuals(fit, design.dataset),
        log_likelihood=fit.log_likelihood,
        converged=fit.converged,
    )


@dataclass(frozen=True)
class GaussianBaselineReport:
    """Ordinary least squares of raw amplitudes on the same dummy design."""

    coefficients: np.ndarray
    standard_errors: np.ndarray
    t_statistics: np.ndarray
    p_values: np.ndarray
    r_squared: float
    residual_dof: int

    def to_dict(self) -> dict:
        return {
            "coefficients": [float(v) for v in self.coefficients],
            "standard_errors": [float(v) for v in self.standard_errors],
            "t_statistics": [float(v) for v in self.t_statistics],
            "p_values": [float(v) for v in self.p_values],
            "r_squared": self.r_squared,
            "residual_dof": self.residual_dof,
        }


def gaussian_baseline(design: RegionDesign) -> GaussianBaselineReport:
    """Classical linear-model comparison fit with t-based p-values."""
    y = design.dataset.y
    x = design.dataset.X
    n, r = x.shape
    xtx = x.T @ x
    try:
        xtx_inv = np.linalg.inv(xtx)
    except np.linalg.LinAlgError:
        raise ValueError("design is rank deficient") from None
    beta = xtx_inv @ (x.T @ y)
    resid = y - x @ beta
    dof = n - r
    sigma2 = float(resid @ resid) / dof
    se = np.sqrt(sigma2 * np.diag(xtx_inv))
    t_stats = beta / se
    p_values = 2.0 * stats.t.sf(np.abs(t_stats), dof)
    tss = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(resid @ resid) / tss
    return GaussianBaselineReport(coefficients=beta, standard_errors=se,
                                  t_statistics=t_stats, p_values=p_values,
                                  r_squared=r2, residual_dof=dof)


def simulate_region_image(labels, mean_by_label: dict, rng: np.random.Generator) -> RegionImage:
    """Sample a synthetic amplitude grid over a given label mask.

    Every labeled pixel draws from the Rayleigh distribution whose mean is
    ``mean_by_label[label]``; unlabeled pixels get amplitude zero.  Useful
    for power and false-alarm studies without external imagery.
    """
    labels = np.asarray(labels)
    amplitudes = np.zeros(labels.shape, dtype=np.float64)
    for label in np.unique(labels[labels > 0]):
        where = labels == label
        try:
            mean = mean_by_label[int(label)]
        except KeyError:
            raise ValueError(f"no mean supplied for region label {label}") from None
        amplitudes[where] = distribution.sample(
            np.full(int(where.sum()), float(mean)), rng)
    return RegionImage(amplitudes=amplitudes, labels=labels)
