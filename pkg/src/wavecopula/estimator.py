"""Rank-based wavelet estimation of a bivariate copula density.

The pipeline: ranks -> pseudo-observations -> empirical scaling
coefficients at the finest level -> periodic DWT -> thresholding ->
inverse DWT -> evaluation on a cell-centred N x N grid. Boundary handling
(periodization, symmetrization, zero padding) and cycle spinning wrap
around that core.

``log`` is the natural logarithm everywhere except in the finest level,
which uses ``log2``.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, replace
from functools import lru_cache
from math import ceil, floor, isqrt, log, log2, sqrt

import numpy as np

from .wavelet import (
    CoefficientPyramid,
    DyadicFunctionTable,
    cascade_eval,
    daubechies_filter,
    dwt2_periodic,
    idwt2_periodic,
)

__all__ = [
    "Rule",
    "Boundary",
    "EstimatorConfig",
    "DensityGrid",
    "as_sample",
    "ranks",
    "level_indices",
    "threshold_level",
    "extend_boundary",
    "empirical_scaling_coeffs",
    "scaling_matrix",
    "apply_local_threshold",
    "apply_global_threshold",
    "estimate",
    "cell_centers",
]

MIN_SAMPLE_SIZE = 8
TABLE_REFINEMENT = 10


class Rule(str, enum.Enum):
    LINEAR = "linear"
    LOCAL = "local"
    GLOBAL = "global"


class Boundary(str, enum.Enum):
    ZERO = "zero"
    PERIODIZE = "per"
    SYMMETRIZE = "sym"


@dataclass(frozen=True)
class EstimatorConfig:
    """Tuning of :func:`estimate`.

    `spins` is the number of cycle-spinning translations; it must be 0 (no
    spinning) or a perfect square ``s*s`` (an s x s shift lattice).
    `levels` overrides the ``(j_n, J_n)`` pair derived from the sample size.
    `seed` is carried for callers that randomize around the estimator; the
    estimator itself is deterministic.
    """

    kappa: float = 1.0
    rule: Rule = Rule.LOCAL
    boundary: Boundary = Boundary.SYMMETRIZE
    spins: int = 25
    wavelet_order: int = 4
    grid_multiplier: int = 4
    seed: int = 0
    levels: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "rule", Rule(self.rule))
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if self.spins < 0 or isqrt(self.spins) ** 2 != self.spins:
            raise ValueError(f"spins must be 0 or a perfect square, got {self.spins}")
        if self.grid_multiplier < 1:
            raise ValueError("grid_multiplier must be >= 1")
        if self.levels is not None:
            j, J = self.levels
            if not 0 <= j <= J:
                raise ValueError(f"levels must satisfy 0 <= j_n <= J_n, got {self.levels}")

    def with_(self, **changes) -> "EstimatorConfig":
        return replace(self, **changes)


@dataclass
class DensityGrid:
    """Copula density values on the cell centres ``((i + 1/2)/N, (j + 1/2)/N)``.

    ``values[iv, iu]``: rows follow the second coordinate v, columns the first.
    """

    values: np.ndarray
    j_n: int | None = None
    J_n: int | None = None
    rule: str | None = None
    boundary: str | None = None
    kappa: float | None = None

    @property
    def n_side(self) -> int:
        return self.values.shape[0]

    def mean(self) -> float:
        return float(self.values.mean())

    def to_json(self) -> str:
        return json.dumps(
            {
                "n_side": self.n_side,
                "j_n": self.j_n,
                "J_n": self.J_n,
                "rule": self.rule,
                "boundary": self.boundary,
                "kappa": self.kappa,
                "values": self.values.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "DensityGrid":
        doc = json.loads(text)
        values = np.asarray(doc["values"], dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError("grid values must be a square matrix")
        if "n_side" in doc and doc["n_side"] != values.shape[0]:
            raise ValueError(f"n_side {doc['n_side']} does not match {values.shape[0]} rows")
        return cls(
            values,
            doc.get("j_n"),
            doc.get("J_n"),
            doc.get("rule"),
            doc.get("boundary"),
            doc.get("kappa"),
        )

    def to_csv(self) -> str:
        return "\n".join(",".join(repr(float(x)) for x in row) for row in self.values) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "DensityGrid":
        rows = [line for line in text.splitlines() if line.strip()]
        values = np.array([[float(x) for x in r.split(",")] for r in rows])
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError("grid CSV must have N rows of N values")
        return cls(values)


def cell_centers(n_side: int) -> np.ndarray:
    return (np.arange(n_side) + 0.5) / n_side


def as_sample(values) -> np.ndarray:
    """Validate raw observations: an ``n x 2`` finite array with ``n >= 8``."""
    x = np.asarray(values, dtype=float)
    if x.ndim != 2 or x.shape[1] != 2:
        raise ValueError(f"sample must be an n x 2 matrix, got shape {x.shape}")
    if x.shape[0] < MIN_SAMPLE_SIZE:
        raise ValueError(f"sample size {x.shape[0]} < {MIN_SAMPLE_SIZE}")
    if not np.all(np.isfinite(x)):
        raise ValueError("sample contains non-finite values")
    return x


def ranks(sample) -> np.ndarray:
    """Pseudo-observations ``R_i / n`` with ``R_i = #{l : X_l < X_i}``.

    Ties are broken by original index, so every column of the result is a
    permutation of ``{0, 1/n, ..., (n-1)/n}``.
    """
    x = np.asarray(sample, dtype=float)
    n = x.shape[0]
    out = np.empty_like(x)
    for col in range(x.shape[1]):
        order = np.argsort(x[:, col], kind="stable")
        r = np.empty(n)
        r[order] = np.arange(n)
        out[:, col] = r / n
    return out


def level_indices(n: int, d: int = 2) -> tuple[int, int]:
    """Coarse level ``j_n`` and finest level ``J_n`` for a sample of size `n`.

    ``j_n`` is the smallest j with ``2**j >= log(n)**(1/d)``;
    ``J_n = floor(log2(n / log n) / d)``, raised to ``j_n`` when the floor
    falls below it.
    """
    if n < MIN_SAMPLE_SIZE:
        raise ValueError(f"sample size {n} too small; need n >= {MIN_SAMPLE_SIZE}")
    j_n = max(0, ceil(log2(log(n) ** (1.0 / d)) - 1e-12))
    J_n = floor(log2(n / log(n)) / d)
    return j_n, max(J_n, j_n)


def threshold_level(n: float, kappa: float = 1.0) -> float:
    """``sqrt(kappa * log(n) / n)``."""
    if n < 2 or kappa <= 0:
        raise ValueError("need n >= 2 and kappa > 0")
    return sqrt(kappa * log(n) / n)


def extend_boundary(pseudo, mode) -> tuple[np.ndarray, float, int]:
    """Map pseudo-observations onto the periodic working domain.

    Returns ``(points, weight_factor, level_shift)``. Symmetrize and zero
    padding double the domain per axis and rescale it back into
    ``[0, 1)**2``; the estimate on the original square is then the working
    estimate at ``u / 2`` times `weight_factor` (coefficients are always
    normalized by the original sample size).
    """
    mode = Boundary(mode)
    pts = np.asarray(pseudo, dtype=float)
    if mode is Boundary.PERIODIZE:
        return pts, 1.0, 0
    if mode is Boundary.ZERO:
        return pts / 2.0, 0.25, 1
    u, v = pts[:, 0], pts[:, 1]
    us = ((u, (-u) % 2.0))
    vs = ((v, (-v) % 2.0))
    mirrored = np.concatenate([np.column_stack([a, b]) for a in us for b in vs])
    return mirrored / 2.0, 0.25, 1


@lru_cache(maxsize=None)
def _table(order: int, refinement: int = TABLE_REFINEMENT) -> DyadicFunctionTable:
    return cascade_eval(daubechies_filter(order), refinement)


def scaling_matrix(x, J: int, table: DyadicFunctionTable) -> np.ndarray:
    """``len(x) x 2**J`` matrix of periodized ``phi_{J,k}(x)``."""
    x = np.asarray(x, dtype=float) % 1.0
    size = 2**J
    L = table.support_length
    t = x * size
    base = np.floor(t)
    out = np.zeros((len(x), size))
    rows = np.arange(len(x))
    for m in range(L + 1):
        k = base - m
        vals = table.phi(t - k)
        np.add.at(out, (rows, k.astype(np.int64) % size), vals)
    return out * 2.0 ** (J / 2.0)


def empirical_scaling_coeffs(pseudo, J: int, table: DyadicFunctionTable, n: int | None = None) -> np.ndarray:
    """``C[k1, k2] = (1/n) sum_i phi_{J,k1}(u_i) phi_{J,k2}(v_i)``, translates wrapped mod ``2**J``."""
    pts = np.asarray(pseudo, dtype=float)
    n = len(pts) if n is None else n
    A = scaling_matrix(pts[:, 0], J, table)
    B = scaling_matrix(pts[:, 1], J, table)
    return A.T @ B / n


def apply_local_threshold(pyramid: CoefficientPyramid, lam: float) -> CoefficientPyramid:
    """Keep a detail coefficient iff its magnitude is strictly above `lam`."""
    out = pyramid.copy()
    for _, _, block in out.blocks():
        block[np.abs(block) <= lam] = 0.0
    return out


def apply_global_threshold(
    pyramid: CoefficientPyramid, lam: float, L: int, d: int = 2, level_offset: int = 0
) -> CoefficientPyramid:
    """Keep a whole (level, orientation) block iff its energy exceeds ``L**d 2**(d j) lam**2``.

    `level_offset` is subtracted from j, for pyramids computed on a domain
    that was doubled per axis.
    """
    out = pyramid.copy()
    for j, _, block in out.blocks():
        bound = L**d * 2.0 ** (d * (j - level_offset)) * lam**2
        if np.sum(block**2) <= bound:
            block[...] = 0.0
    return out


def _zero_details(pyramid: CoefficientPyramid) -> CoefficientPyramid:
    out = pyramid.copy()
    for _, _, block in out.blocks():
        block[...] = 0.0
    return out


def _shift_lattice(spins: int, J: int) -> list[tuple[float, float]]:
    s = isqrt(spins)
    if s == 0:
        return [(0.0, 0.0)]
    step = 1.0 / (s * 2**J)
    return [(a * step, b * step) for a in range(s) for b in range(s)]


def estimate(sample, config: EstimatorConfig | None = None) -> DensityGrid:
    """Estimate the copula density of a raw ``n x 2`` sample on the cell-centred grid."""
    config = config or EstimatorConfig()
    x = as_sample(sample)
    n = x.shape[0]
    pseudo = ranks(x)
    j_n, J_n = config.levels or level_indices(n, 2)
    lam = threshold_level(n, config.kappa)
    spec = daubechies_filter(config.wavelet_order)
    table = _table(config.wavelet_order)
    pts, weight, shift = extend_boundary(pseudo, config.boundary)
    J, coarse = J_n + shift, j_n + shift
    # thresholds act on coefficients expressed at the copula's own scale
    lam_work = lam / sqrt(weight)

    N = config.grid_multiplier * 2**J_n
    centers = cell_centers(N) * (0.5 if shift else 1.0)

    total = np.zeros((N, N))
    shifts = _shift_lattice(config.spins, J)
    for du, dv in shifts:
        moved = (pts + np.array([du, dv])) % 1.0
        C = empirical_scaling_coeffs(moved, J, table, n=n)
        pyramid = dwt2_periodic(C, spec, coarse)
        if config.rule is Rule.LINEAR:
            pyramid = _zero_details(pyramid)
        elif config.rule is Rule.LOCAL:
            pyramid = apply_local_threshold(pyramid, lam_work)
        else:
            pyramid = apply_global_threshold(pyramid, lam_work, spec.support_length, 2, shift)
        C = idwt2_periodic(pyramid, spec)
        Pu = scaling_matrix(centers + du, J, table)
        Pv = scaling_matrix(centers + dv, J, table)
        total += Pu @ C @ Pv.T
    values = weight * total / len(shifts)
    return DensityGrid(
        values.T.copy(), j_n, J_n, config.rule.value, config.boundary.value, float(config.kappa)
    )
