"""Command-line front end: ``python -m wavecopula <command> ...``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import date

import numpy as np

from . import besov
from .copulas import CopulaModel, MarginSpec, apply_margins, sample
from .estimator import Boundary, DensityGrid, EstimatorConfig, Rule, estimate
from .fitting import fit_table, fit_table_to_csv
from .metrics import Q_VALUES, monte_carlo_bench, monte_carlo_errors, parse_q, reports_to_csv, reports_to_json

__all__ = ["log_returns", "read_series", "align_pair", "main"]

MIN_SERIES_ROWS = 10


class CliError(Exception):
    pass


def log_returns(prices) -> np.ndarray:
    """``log(p[t+1] / p[t])``; rejects non-positive prices by row number (1-based)."""
    p = np.asarray(prices, dtype=float)
    if p.ndim != 1 or len(p) < 2:
        raise ValueError("need at least 2 prices")
    bad = np.flatnonzero(~(p > 0))
    if len(bad):
        raise ValueError(f"non-positive price {p[bad[0]]!r} at row {bad[0] + 1}")
    return np.diff(np.log(p))


def read_series(text: str) -> dict:
    """Parse a ``date,close`` CSV (ISO-8601 dates) into an ordered ``{date: price}``."""
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames[:2]] != ["date", "close"]:
        raise ValueError("series CSV needs the header 'date,close'")
    out = {}
    for line, row in enumerate(reader, start=2):
        try:
            day = date.fromisoformat(row["date"].strip())
            price = float(row["close"])
        except (ValueError, AttributeError) as exc:
            raise ValueError(f"line {line}: {exc}") from None
        if not price > 0:
            raise ValueError(f"line {line}: non-positive price {price}")
        out[day] = price
    if len(out) < MIN_SERIES_ROWS:
        raise ValueError(f"series has {len(out)} rows; need at least {MIN_SERIES_ROWS}")
    return dict(sorted(out.items()))


def align_pair(series_a: dict, series_b: dict) -> np.ndarray:
    """Inner-join two series on date, then take log-returns of each column."""
    common = sorted(set(series_a) & set(series_b))
    if len(common) < MIN_SERIES_ROWS:
        raise ValueError(f"only {len(common)} common dates; need at least {MIN_SERIES_ROWS}")
    a = log_returns([series_a[d] for d in common])
    b = log_returns([series_b[d] for d in common])
    return np.column_stack([a, b])


def _parse_margin(token: str) -> MarginSpec:
    token = token.strip().lower()
    if token in ("uniform", "unif"):
        return MarginSpec("uniform")
    if token in ("gauss", "gaussian", "normal"):
        return MarginSpec("gaussian")
    if token.startswith("exp"):
        rate = token.partition(":")[2] or "1"
        return MarginSpec("exponential", float(rate))
    raise CliError(f"unknown margin {token!r}")


def _parse_margins(text: str):
    if text == "default":
        return (MarginSpec("exponential", 4.0), MarginSpec("gaussian"))
    parts = text.split(",")
    if len(parts) != 2:
        raise CliError("margins must be 'default' or two comma-separated margins, e.g. exp:4,gauss")
    return tuple(_parse_margin(p) for p in parts)


def _read_sample(path: str) -> np.ndarray:
    with open(path) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["x", "y"]:
            raise CliError(f"{path}: expected header 'x,y'")
        rows = [[float(v) for v in row] for row in reader if row]
    return np.array(rows)


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _floats(text: str):
    return [float(t) for t in text.split(",") if t.strip()]


def _config(args, **overrides) -> EstimatorConfig:
    fields = dict(
        kappa=args.kappa,
        rule=args.rule,
        boundary=args.boundary,
        spins=args.spins,
        wavelet_order=args.order,
        grid_multiplier=args.grid_multiplier,
        seed=getattr(args, "seed", 0),
    )
    fields.update(overrides)
    return EstimatorConfig(**fields)


def cmd_simulate(args):
    model = CopulaModel(args.family, tuple(args.params))
    u = sample(model, args.n, np.random.default_rng(args.seed))
    x = apply_margins(u, _parse_margins(args.margins))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y"])
    w.writerows([[repr(float(a)), repr(float(b))] for a, b in x])
    _write(buf.getvalue(), args.out)


def cmd_estimate(args):
    if args.series:
        with open(args.series[0]) as fa, open(args.series[1]) as fb:
            x = align_pair(read_series(fa.read()), read_series(fb.read()))
    elif args.input:
        x = _read_sample(args.input)
    else:
        raise CliError("estimate needs --in sample.csv or --series A.csv B.csv")
    grid = estimate(x, _config(args))
    out = args.out
    _write(grid.to_csv() if out and out.endswith(".csv") else grid.to_json() + "\n", out)


def cmd_bench(args):
    model = CopulaModel(args.family, tuple(args.params))
    margins = _parse_margins(args.margins)
    qs = [parse_q(q) for q in args.q.split(",")]
    reports = []
    kappas = _floats(args.kappa) if isinstance(args.kappa, str) else [args.kappa]
    for kappa in kappas:
        config = _config(args, kappa=kappa)
        errors = monte_carlo_errors(model, margins, args.n, config, args.reps, args.seed, args.workers)
        reports += monte_carlo_bench(model, margins, args.n, config, args.reps, args.seed, q=qs, errors=errors)
    out = args.out
    _write(reports_to_json(reports) + "\n" if out and out.endswith(".json") else reports_to_csv(reports), out)


def cmd_fit(args):
    with open(args.benchmark) as fh:
        text = fh.read()
    grid = DensityGrid.from_csv(text) if args.benchmark.endswith(".csv") else DensityGrid.from_json(text)
    qs = Q_VALUES if args.q == "all" else [parse_q(q) for q in args.q.split(",")]
    _write(fit_table_to_csv(fit_table(grid, qs)), args.out)


def cmd_diagnose(args):
    d = 2
    r = 2 * d / (2 * args.s + d)
    s_strong = d * args.s / (2 * args.s + d)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["J_max", "strong", "weak_local", "weak_global"])
    for J in (int(t) for t in args.jmax_list.split(",")):
        seq = besov.sparse_counterexample(args.alpha, args.s, d, J)
        w.writerow(
            [
                J,
                f"{besov.strong_besov_functional(seq, s_strong):.10g}",
                f"{besov.weak_besov_local(seq, r):.10g}",
                f"{besov.weak_besov_global(seq, r):.10g}",
            ]
        )
    _write(buf.getvalue(), args.out)


def _add_estimator_flags(p, kappa_default="1.0", multi_kappa=False):
    if multi_kappa:
        p.add_argument("--kappa", default="0.5,1,2,4", help="comma-separated threshold constants (default: 0.5,1,2,4)")
    else:
        p.add_argument("--kappa", type=float, default=float(kappa_default), help="threshold constant (default: 1.0)")
    p.add_argument("--rule", choices=[r.value for r in Rule], default="local", help="thresholding rule (default: local)")
    p.add_argument("--boundary", choices=[b.value for b in Boundary], default="sym",
                   help="boundary handling: zero padding, periodization, symmetrization (default: sym)")
    p.add_argument("--spins", type=int, default=25, help="cycle-spinning shifts, 0 or a perfect square (default: 25)")
    p.add_argument("--order", type=int, default=4, help="Daubechies order (default: 4)")
    p.add_argument("--grid-multiplier", type=int, default=4, help="grid side is this times 2**J_n (default: 4)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wavecopula", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="draw a sample from a parametric copula")
    p.add_argument("--family", required=True, help="independence, fgm, gaussian, student, clayton, frank, gumbel")
    p.add_argument("--params", type=float, nargs="*", default=[], help="family parameters (student: rho nu)")
    p.add_argument("--n", type=int, default=2000, help="sample size (default: 2000)")
    p.add_argument("--margins", default="default",
                   help="'default' (exp:4,gauss) or two of uniform|gauss|exp:RATE")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default: 0)")
    p.add_argument("--out", help="output CSV with header x,y (default: stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="estimate a copula density grid from a sample")
    p.add_argument("--in", dest="input", help="sample CSV with header x,y")
    p.add_argument("--series", nargs=2, metavar=("A", "B"), help="two date,close CSVs; log-returns on common dates")
    _add_estimator_flags(p)
    p.add_argument("--out", help="grid.json (envelope) or grid.csv (values only); default: JSON on stdout")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("bench", help="Monte Carlo relative errors for one copula")
    p.add_argument("--family", required=True)
    p.add_argument("--params", type=float, nargs="*", default=[])
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--reps", type=int, default=20, help="repetitions, at least 2 (default: 20)")
    p.add_argument("--q", default="2", help="comma-separated subset of 1,2,inf (default: 2)")
    p.add_argument("--margins", default="default")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1, help="parallel processes (default: 1)")
    _add_estimator_flags(p, multi_kappa=True)
    p.add_argument("--out", help="table.csv or table.json (default: CSV on stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("fit", help="fit the five parametric classes to a benchmark grid")
    p.add_argument("--benchmark", required=True, help="grid JSON envelope or grid CSV")
    p.add_argument("--q", default="all", help="comma-separated subset of 1,2,inf, or 'all' (default)")
    p.add_argument("--out", help="output CSV (default: stdout)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("diagnose", help="Besov functionals of the sparse counterexample")
    p.add_argument("--alpha", type=float, default=1.0, help="decay exponent, d/2 <= alpha < s + d/2 (default: 1)")
    p.add_argument("--s", type=float, default=1.0, help="smoothness s > 0 (default: 1)")
    p.add_argument("--jmax-list", default="8,10,12,14", help="truncation levels (default: 8,10,12,14)")
    p.add_argument("--out", help="output CSV (default: stdout)")
    p.set_defaults(func=cmd_diagnose)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (CliError, ValueError, OSError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
