"""Command-line interface: ``orthofit fit|simulate|bench``.

Results go to stdout as JSON. Diagnostics go to stderr. The exit status is 0
on success, 2 for input or usage errors, and 3 for numerical degeneracy.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .core import DesignMatrix, with_intercept
from .errors import DegeneracyError, OrthofitError
from .regress import (
    FitResult,
    SimpleRegressionData,
    fit_normal_equations,
    fit_projection,
    fit_simple_closed_form,
)
from .simulate import SimConfig, benchmark, run_simulation

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DEGENERATE = 3


class InputError(OrthofitError, ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


@dataclass
class CsvDataset:
    names: list[str]
    columns: dict[str, np.ndarray]

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.columns.values())))


def read_csv(path: str) -> CsvDataset:
    """Parse a comma-separated numeric table with a mandatory header row."""
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    with fh:
        rows = [(lineno, row) for lineno, row in enumerate(csv.reader(fh), start=1) if row]
    if not rows:
        raise InputError(f"{path}: empty file, header row required")
    _, header = rows[0]
    names = [h.strip() for h in header]
    if len(set(names)) != len(names) or any(not h for h in names):
        raise InputError(f"{path}: line 1: header names must be non-empty and unique")
    data = []
    for lineno, row in rows[1:]:
        if len(row) != len(names):
            raise InputError(f"{path}: line {lineno}: expected {len(names)} fields, got {len(row)}")
        values = []
        for field in row:
            try:
                v = float(field)
            except ValueError:
                raise InputError(f"{path}: line {lineno}: not a number: {field.strip()!r}") from None
            if not math.isfinite(v):
                raise InputError(f"{path}: line {lineno}: non-finite value {field.strip()!r}")
            values.append(v)
        data.append(values)
    if len(data) < 2:
        raise InputError(f"{path}: at least 2 data rows required, got {len(data)}")
    arr = np.array(data, dtype=np.float64)
    return CsvDataset(names, {name: arr[:, j].copy() for j, name in enumerate(names)})


def fit_result_to_dict(fit: FitResult) -> dict:
    return {
        "method": fit.method.value,
        "rank": fit.rank,
        "rss": fit.rss,
        "r_squared": fit.r_squared,
        "coefficients": None if fit.coefficients is None else [float(c) for c in fit.coefficients],
        "fitted": [float(v) for v in fit.fitted],
        "residuals": [float(v) for v in fit.residuals],
    }


def dumps(obj) -> str:
    # float repr is the shortest string that round-trips to the same binary64
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def cmd_fit(args) -> int:
    ds = read_csv(args.csv)
    if args.response not in ds.columns:
        raise InputError(f"response column {args.response!r} not in header {ds.names}")
    y = ds.columns[args.response]
    regressors = [ds.columns[n] for n in ds.names if n != args.response]
    if args.method == "simple":
        if len(regressors) != 1:
            raise InputError(f"method 'simple' needs exactly one regressor, got {len(regressors)}")
        if not args.intercept:
            raise InputError("method 'simple' always fits an intercept; drop --no-intercept")
        fit = fit_simple_closed_form(SimpleRegressionData(regressors[0], y))
    else:
        if args.intercept:
            x = with_intercept(regressors, n=len(y))
        elif regressors:
            x = DesignMatrix.from_columns(regressors)
        else:
            raise InputError("no regressors and --no-intercept: empty design")
        solver = fit_projection if args.method == "projection" else fit_normal_equations
        fit = solver(x, y)
    sys.stdout.write(dumps(fit_result_to_dict(fit)))
    return EXIT_OK


def load_config(path: str) -> SimConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None
    return SimConfig.from_dict(raw)


def cmd_simulate(args) -> int:
    report = run_simulation(load_config(args.config), workers=args.workers)
    sys.stdout.write(dumps(report.to_dict()))
    return EXIT_OK


def cmd_bench(args) -> int:
    report = benchmark(load_config(args.config))
    sys.stdout.write(dumps(report.to_dict()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="orthofit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fit", help="fit a least-squares model to a CSV file")
    p.add_argument("csv")
    p.add_argument("--response", required=True, help="name of the response column")
    p.add_argument("--no-intercept", dest="intercept", action="store_false",
                   help="do not prepend a column of ones")
    p.add_argument("--method", choices=("projection", "normal", "simple"), default="projection")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("simulate", help="run a Monte Carlo simulation from a JSON config")
    p.add_argument("config")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", help="time projection against normal equations")
    p.add_argument("config")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DegeneracyError as exc:
        print(f"orthofit: numerical degeneracy: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except OrthofitError as exc:
        print(f"orthofit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
