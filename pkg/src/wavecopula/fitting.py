"""Fit parametric copula families to a nonparametric benchmark grid.

For each class the parameter minimizing the grid distance
``E_q(theta) = ||benchmark - c_theta||_{N,q}`` is found by exhaustive
scan of a fixed lattice; the family with the smallest minimum wins.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .copulas import CopulaModel, _student_density, density
from .estimator import DensityGrid, cell_centers
from .metrics import Q_VALUES, _q_label, grid_norm, parse_q

__all__ = [
    "ParametricClass",
    "ClassFit",
    "FitResult",
    "parametric_classes",
    "fit_class",
    "best_family",
    "fit_table",
    "fit_table_to_csv",
]


def _lattice(lo, hi, step):
    # never step past hi when step does not divide the range
    count = int(np.floor((hi - lo) / step + 1e-9))
    return np.round(lo + step * np.arange(count + 1), 10)


@dataclass(frozen=True)
class ParametricClass:
    """A copula family with its parameter lattice (one row per candidate)."""

    index: int
    family: str
    lattice: np.ndarray = field(repr=False)

    def model(self, row) -> CopulaModel:
        return CopulaModel(self.family, tuple(row))

    def __len__(self):
        return len(self.lattice)


def parametric_classes(step: float = 0.01) -> list[ParametricClass]:
    """The five candidate classes; `step` refines the continuous parameter axes."""
    rho = _lattice(-0.99, 0.99, step)
    nu = np.arange(1, 101, dtype=float)
    student = np.array([(r, v) for r in rho for v in nu])
    return [
        ParametricClass(1, "gaussian", rho[:, None]),
        ParametricClass(2, "student", student),
        ParametricClass(3, "gumbel", _lattice(1.0, 2.0, step)[:, None]),
        ParametricClass(4, "clayton", _lattice(0.0, 2.0, step)[:, None]),
        ParametricClass(5, "frank", _lattice(-2.0, 2.0, step)[:, None]),
    ]


@dataclass
class ClassFit:
    family: str
    theta: tuple
    error: float


@dataclass
class FitResult:
    """Per-class fits for one contrast ``q`` and the overall winner."""

    q: str
    fits: list
    winner: ClassFit
    relative_error_percent: float


def _values(benchmark):
    return benchmark.values if isinstance(benchmark, DensityGrid) else np.asarray(benchmark, dtype=float)


def _render_all(cls: ParametricClass, n_side: int):
    """Yield ``(row_index, density grid)`` over the lattice, in lattice order."""
    c = cell_centers(n_side)
    uu, vv = np.meshgrid(c, c)
    if cls.family != "student":
        for i, row in enumerate(cls.lattice):
            yield i, density(cls.model(row), uu, vv)
        return
    # quantiles depend on nu only; reuse them across rho
    cache = {}
    for i, (rho, nu) in enumerate(cls.lattice):
        if nu not in cache:
            q = special.stdtrit(nu, c)
            cache[nu] = np.meshgrid(q, q)
        x, y = cache[nu]
        yield i, _student_density(uu, vv, rho, nu, x, y)


def _tie_key(row):
    # smaller |theta| first, then smaller nu, then smaller signed theta
    return (abs(row[0]), row[1] if len(row) > 1 else 0.0, row[0])


def scan_errors(benchmark, cls: ParametricClass, q=2) -> np.ndarray:
    """``E_q`` for every lattice row, in lattice order."""
    b = _values(benchmark)
    q = parse_q(q)
    errors = np.empty(len(cls))
    for i, grid in _render_all(cls, b.shape[0]):
        errors[i] = grid_norm(b - grid, q)
    return errors


def _argmin_with_ties(errors, lattice):
    best = errors.min()
    tied = np.flatnonzero(errors <= best + 1e-12 * max(1.0, abs(best)))
    return min(tied, key=lambda i: _tie_key(lattice[i]))


def fit_class(benchmark, cls: ParametricClass, q=2) -> tuple[tuple, float]:
    """Lattice arg-min ``(theta_hat, E_q(theta_hat))`` for one class."""
    b = _values(benchmark)
    if not np.all(np.isfinite(b)):
        raise ValueError("benchmark grid has non-finite values")
    errors = scan_errors(b, cls, q)
    i = _argmin_with_ties(errors, cls.lattice)
    return tuple(float(t) for t in cls.lattice[i]), float(errors[i])


def best_family(benchmark, q=2, classes=None) -> FitResult:
    """Fit every class and pick the smallest error; ties go to the lower class index."""
    classes = classes or parametric_classes()
    b = _values(benchmark)
    q = parse_q(q)
    fits = []
    for cls in classes:
        theta, err = fit_class(b, cls, q)
        fits.append(ClassFit(cls.family, theta, err))
    errs = np.array([f.error for f in fits])
    best = errs.min()
    winner = fits[int(np.flatnonzero(errs <= best + 1e-12 * max(1.0, abs(best)))[0])]
    c_win = density(CopulaModel(winner.family, winner.theta), *np.meshgrid(cell_centers(b.shape[0]), cell_centers(b.shape[0])))
    rel = 100.0 * winner.error / grid_norm(c_win, q)
    return FitResult(_q_label(q), fits, winner, rel)


def fit_table(benchmark, qs=Q_VALUES, classes=None) -> list[FitResult]:
    return [best_family(benchmark, q, classes) for q in qs]


def _fmt_theta(theta):
    if len(theta) == 1:
        return f"{theta[0]:.2f}"
    return f"({theta[0]:.2f},{int(theta[1])})"


def fit_table_to_csv(results: list[FitResult]) -> str:
    """Rows per family with ``theta_q, E_q`` for each contrast, then the winners."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["family"]
    for r in results:
        header += [f"theta_{r.q}", f"E_{r.q}"]
    w.writerow(header)
    for k, fit in enumerate(results[0].fits):
        row = [fit.family]
        for r in results:
            f = r.fits[k]
            row += [_fmt_theta(f.theta), f"{f.error:.4g}"]
        w.writerow(row)
    row = ["best"]
    for r in results:
        row += [f"{r.winner.family}:{_fmt_theta(r.winner.theta)}", f"{r.relative_error_percent:.2f}%"]
    w.writerow(row)
    return buf.getvalue()
