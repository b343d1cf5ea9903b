"""Command-line front end: fit, detect, simulate, and sample.

Every command is deterministic given its flags, inputs, and seed; numeric
output carries 15 significant digits.  Exit codes: 0 success, 1 usage
error, 2 data error, 3 non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import distribution
from .diagnostics import (confidence_intervals, quantile_residuals,
                          r_squared, standard_errors)
from .montecarlo import ScenarioSpec, read_scenario_config, run_scenario
from .regression import (ConvergenceError, RegressionDataset, fit_mle,
                         get_link)
from .sar import detect_regions, gaussian_baseline, build_design, load_region_image

__all__ = ["main", "DEFAULT_SEED"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NO_CONVERGENCE = 3

# Fixed default so every run is reproducible without flags.
DEFAULT_SEED = 12345


class _UsageError(Exception):
    pass


class _DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; this tool reserves 2 for
    # data errors, so usage failures are remapped to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def _round15(obj):
    """Recursively round floats to 15 significant digits for JSON output."""
    if isinstance(obj, float):
        return float(f"{obj:.15g}")
    if isinstance(obj, dict):
        return {k: _round15(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round15(v) for v in obj]
    return obj


def _emit_json(payload: dict) -> None:
    print(json.dumps(_round15(payload), indent=2, sort_keys=True))


def _read_fit_csv(path: str):
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            try:
                header = next(reader)
            except StopIteration:
                raise _DataError(f"{path}: empty file") from None
            header = [h.strip() for h in header]
            if "y" not in header:
                raise _UsageError(
                    f"{path}: header must contain a 'y' column, got "
                    f"{', '.join(header) or 'nothing'}")
            y_col = header.index("y")
            rows = []
            for lineno, cells in enumerate(reader, 2):
                if not cells:
                    continue
                if len(cells) != len(header):
                    raise _DataError(
                        f"{path}: row {lineno} has {len(cells)} cells, "
                        f"expected {len(header)}")
                try:
                    rows.append([float(c) for c in cells])
                except ValueError:
                    raise _DataError(
                        f"{path}: row {lineno} contains a non-numeric cell") from None
    except OSError as exc:
        raise _DataError(f"cannot read {path}: {exc.strerror}") from None
    if not rows:
        raise _DataError(f"{path}: no data rows")
    table = np.asarray(rows)
    y = table[:, y_col]
    bad = ~(np.isfinite(y) & (y > 0.0))
    if np.any(bad):
        row = int(np.argmax(bad)) + 2
        raise _DataError(
            f"{path}: row {row}: y = {y[row - 2]!r} must be a strictly "
            f"positive amplitude")
    covariate_cols = [i for i in range(len(header)) if i != y_col]
    names = [header[i] for i in covariate_cols]
    return y, table[:, covariate_cols], names


def _cmd_fit(args) -> int:
    link = get_link(args.link)
    y, covariates, names = _read_fit_csv(args.data)
    if args.no_intercept and covariates.shape[1] == 0:
        raise _UsageError("no covariates and no intercept leaves nothing to fit")
    if args.no_intercept:
        x = covariates
        columns = names
    else:
        x = np.column_stack([np.ones(y.shape[0]), covariates])
        columns = ["intercept"] + names
    try:
        data = RegressionDataset(y, x)
    except ValueError as exc:
        raise _DataError(str(exc)) from None
    fit = fit_mle(data, link)
    if not fit.converged:
        _emit_json({
            "converged": False,
            "iterations": fit.iterations,
            "gradient_norm": fit.gradient_norm,
            "message": fit.message,
        })
        return EXIT_NO_CONVERGENCE
    level = 0.95
    payload = {
        "converged": True,
        "link": args.link,
        "columns": columns,
        "coefficients": list(fit.beta_hat),
        "standard_errors": list(standard_errors(fit)),
        "confidence_level": level,
        "confidence_intervals": [list(row) for row in
                                 confidence_intervals(fit, level)],
        "log_likelihood": fit.log_likelihood,
        "r_squared": r_squared(fit, data, link),
        "iterations": fit.iterations,
        "gradient_norm": fit.gradient_norm,
        "n_observations": data.n_obs,
    }
    if args.residuals:
        quantile_residuals(fit, data).to_csv(args.residuals)
    _emit_json(payload)
    return EXIT_OK


def _cmd_detect(args) -> int:
    if not 0.0 < args.pfa < 1.0:
        raise _UsageError(f"--pfa must lie strictly inside (0, 1), got {args.pfa}")
    try:
        image = load_region_image(args.amplitude, args.mask)
    except OSError as exc:
        raise _DataError(f"cannot read image input: {exc}") from None
    except ValueError as exc:
        raise _DataError(str(exc)) from None
    baseline = args.baseline
    if baseline is None:
        baseline = int(image.region_ids[0])
    try:
        report = detect_regions(image, baseline, args.pfa)
    except ValueError as exc:
        raise _DataError(str(exc)) from None
    payload = report.to_dict()
    if args.gaussian:
        payload["gaussian_baseline"] = gaussian_baseline(
            build_design(image, baseline)).to_dict()
    if args.residuals:
        report.residuals.to_csv(args.residuals)
    _emit_json(payload)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    # The precondition is a config that parses into a valid scenario, so
    # validation failures are usage errors; unreadable files are data errors.
    try:
        spec = read_scenario_config(args.config)
    except OSError as exc:
        raise _DataError(f"cannot read {args.config}: {exc.strerror}") from None
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    if args.seed is not None:
        spec = ScenarioSpec(true_beta=spec.true_beta, n_obs=spec.n_obs,
                            replications=spec.replications, seed=args.seed,
                            covariates=spec.covariates, link=spec.link)
    summary = run_scenario(spec)
    if args.output == "csv":
        sys.stdout.write(summary.to_csv())
    else:
        payload = {
            "true_beta": list(spec.true_beta),
            "n_obs": spec.n_obs,
            "replications": spec.replications,
            "seed": spec.seed,
            "link": spec.link.name,
        }
        payload.update(summary.to_dict())
        _emit_json(payload)
    return EXIT_OK


def _cmd_sample(args) -> int:
    if not (np.isfinite(args.mu) and args.mu > 0.0):
        raise _UsageError(f"--mu must be positive, got {args.mu}")
    if args.count < 1:
        raise _UsageError(f"--count must be >= 1, got {args.count}")
    seed = DEFAULT_SEED if args.seed is None else args.seed
    rng = np.random.default_rng(seed)
    draws = distribution.sample(args.mu, rng, size=args.count)
    sys.stdout.write("\n".join(f"{v:.15g}" for v in np.atleast_1d(draws)) + "\n")
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="rayreg",
                     description="Rayleigh regression fitting, Wald-test "
                                 "region detection, and Monte Carlo studies "
                                 "for nonnegative amplitude signals.")
    parser.add_argument("--seed", type=int, default=None,
                        help=f"random seed (default {DEFAULT_SEED}; overrides "
                             f"the config seed for 'simulate')")
    parser.add_argument("--output", choices=("json", "csv"), default="json",
                        help="payload format where both are supported "
                             "(simulate); default json")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit the model to a CSV dataset")
    p_fit.add_argument("--data", required=True,
                       help="CSV with a 'y' column; other columns are covariates")
    p_fit.add_argument("--link", default="log", help="link function (default log)")
    p_fit.add_argument("--no-intercept", action="store_true",
                       help="do not prepend a column of ones")
    p_fit.add_argument("--residuals", default=None, metavar="PATH",
                       help="also write quantile residuals as CSV")

    p_det = sub.add_parser("detect", help="region detection on an amplitude image")
    p_det.add_argument("--amplitude", required=True,
                       help="amplitude grid, CSV of reals or binary PGM")
    p_det.add_argument("--mask", required=True, help="region-label grid, CSV of ints")
    p_det.add_argument("--baseline", type=int, default=None,
                       help="baseline region label (default: smallest label)")
    p_det.add_argument("--pfa", type=float, default=0.05,
                       help="probability of false alarm (default 0.05)")
    p_det.add_argument("--gaussian", action="store_true",
                       help="include the Gaussian least-squares baseline")
    p_det.add_argument("--residuals", default=None, metavar="PATH",
                       help="also write quantile residuals as CSV")

    p_sim = sub.add_parser("simulate", help="run a Monte Carlo scenario")
    p_sim.add_argument("--config", required=True,
                       help="key = value scenario file (beta, N, replications, "
                            "seed, link, covariates)")

    p_sam = sub.add_parser("sample", help="draw from the distribution by inversion")
    p_sam.add_argument("--mu", type=float, required=True, help="distribution mean")
    p_sam.add_argument("--count", type=int, required=True, help="number of draws")

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {
            "fit": _cmd_fit,
            "detect": _cmd_detect,
            "simulate": _cmd_simulate,
            "sample": _cmd_sample,
        }[args.command]
        return handler(args)
    except _UsageError as exc:
        print(f"rayreg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _DataError as exc:
        print(f"rayreg: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ConvergenceError as exc:
        print(f"rayreg: did not converge: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
