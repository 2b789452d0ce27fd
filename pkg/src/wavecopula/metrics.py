"""Empirical grid norms, relative errors and the Monte Carlo benchmark harness.

Norms are means over the grid cells, so the constant-one grid has unit
norm for every ``q`` and ``L1 <= L2 <= Linf`` holds for every grid.

Benchmark tables report the q=2 error as the *squared* norm ratio
(relative quadratic error); q=1 and q=inf are reported as plain ratios.
"""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .copulas import CopulaModel, MarginSpec, apply_margins, density_on_grid, sample
from .estimator import DensityGrid, EstimatorConfig, estimate

__all__ = [
    "Q_VALUES",
    "BenchReport",
    "parse_q",
    "grid_norm",
    "relative_error",
    "truth_grid",
    "monte_carlo_errors",
    "monte_carlo_bench",
    "reports_to_csv",
    "reports_to_json",
]

Q_VALUES = (1, 2, np.inf)
DEFAULT_MARGINS = (MarginSpec("exponential", 4.0), MarginSpec("gaussian"))
METHOD_NAMES = {"local": "Local", "global": "Block", "linear": "Linear"}


def parse_q(q):
    """Accept 1, 2, inf or their string spellings."""
    if isinstance(q, str):
        q = q.strip().lower()
        if q in ("inf", "infinity", "max"):
            return np.inf
        q = float(q)
    if q == np.inf:
        return np.inf
    if q not in (1, 2):
        raise ValueError(f"q must be 1, 2 or inf, got {q!r}")
    return int(q)


def _values(grid):
    return grid.values if isinstance(grid, DensityGrid) else np.asarray(grid, dtype=float)


def grid_norm(grid, q=2) -> float:
    """Mean-normalized empirical L_q norm of a grid."""
    v = np.abs(_values(grid))
    q = parse_q(q)
    if q == 1:
        return float(v.mean())
    if q == 2:
        return float(np.sqrt(np.mean(v**2)))
    return float(v.max())


def relative_error(est, truth, q=2) -> float:
    """``||est - truth||_q / ||truth||_q`` on a common grid."""
    a, b = _values(est), _values(truth)
    if a.shape != b.shape:
        raise ValueError(f"grid shapes differ: {a.shape} vs {b.shape}")
    denom = grid_norm(b, q)
    if denom == 0:
        raise ValueError("truth grid has zero norm")
    return grid_norm(a - b, q) / denom


def truth_grid(model: CopulaModel, n_side: int) -> DensityGrid:
    """The model's density at the estimator's cell centres (never on 0 or 1)."""
    return DensityGrid(density_on_grid(model, n_side))


@dataclass
class BenchReport:
    family: str
    parameters: tuple
    method: str
    boundary: str
    q: str
    repetitions: int
    mean: float
    std: float
    n: int = 0
    kappa: float = 0.0

    def __post_init__(self):
        if self.repetitions < 2:
            raise ValueError("a benchmark needs at least 2 repetitions")


def _one_repetition(args):
    model, margins, n, config, seed_seq = args
    rng = np.random.default_rng(seed_seq)
    x = apply_margins(sample(model, n, rng), margins)
    est = estimate(x, config)
    truth = truth_grid(model, est.n_side)
    diff = est.values - truth.values
    distances = [grid_norm(diff, q) for q in Q_VALUES]
    ratios = [relative_error(est, truth, q) for q in Q_VALUES]
    return distances + ratios


def monte_carlo_errors(
    model: CopulaModel,
    margins=DEFAULT_MARGINS,
    n: int = 2000,
    config: EstimatorConfig | None = None,
    repetitions: int = 20,
    seed: int = 0,
    workers: int = 1,
) -> dict:
    """Per-repetition distances ``E_q`` and ratios ``RE^q`` for q = 1, 2, inf.

    Returns a dict with arrays ``"E"`` and ``"RE"`` of shape
    ``(repetitions, 3)``, columns ordered as :data:`Q_VALUES`. Each
    repetition draws from its own child of ``SeedSequence(seed)``, and
    rows stay in repetition order whatever the worker count.
    """
    config = config or EstimatorConfig()
    children = np.random.SeedSequence(seed).spawn(repetitions)
    jobs = [(model, margins, n, config, s) for s in children]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_one_repetition, jobs))
    else:
        rows = [_one_repetition(j) for j in jobs]
    rows = np.array(rows)
    return {"E": rows[:, :3], "RE": rows[:, 3:]}


def _q_label(q) -> str:
    return "inf" if q == np.inf else str(int(q))


def monte_carlo_bench(
    model: CopulaModel,
    margins=DEFAULT_MARGINS,
    n: int = 2000,
    config: EstimatorConfig | None = None,
    repetitions: int = 20,
    seed: int = 0,
    q=2,
    workers: int = 1,
    errors: dict | None = None,
):
    """Mean and standard deviation of the relative error over repetitions.

    `q` may be a single value (returns one :class:`BenchReport`) or a
    sequence (returns a list). Pass precomputed `errors` from
    :func:`monte_carlo_errors` to avoid re-running the simulation.
    """
    config = config or EstimatorConfig()
    if repetitions < 2:
        raise ValueError("a benchmark needs at least 2 repetitions")
    if errors is None:
        errors = monte_carlo_errors(model, margins, n, config, repetitions, seed, workers)
    single = not isinstance(q, (list, tuple))
    reports = []
    for qq in [q] if single else q:
        qq = parse_q(qq)
        col = errors["RE"][:, Q_VALUES.index(qq)]
        if qq == 2:
            col = col**2
        reports.append(
            BenchReport(
                family=model.family,
                parameters=model.params,
                method=METHOD_NAMES[config.rule.value],
                boundary=config.boundary.value,
                q=_q_label(qq),
                repetitions=repetitions,
                mean=float(col.mean()),
                std=float(col.std(ddof=1)),
                n=n,
                kappa=float(config.kappa),
            )
        )
    return reports[0] if single else reports


REPORT_COLUMNS = ("family", "param", "method", "boundary", "kappa", "n", "q", "reps", "mean", "std")


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for r in reports:
        param = ",".join(f"{p:g}" for p in r.parameters)
        w.writerow(
            [r.family, param, r.method, r.boundary, f"{r.kappa:g}", r.n, r.q,
             r.repetitions, f"{r.mean:.6g}", f"{r.std:.6g}"]
        )
    return buf.getvalue()


def reports_to_json(reports) -> str:
    return json.dumps([asdict(r) for r in reports], indent=2)
