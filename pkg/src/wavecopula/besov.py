"""Truncated Besov and weak-Besov sequence functionals for d = 2.

All functionals act on a finite :class:`CoefficientSequence`, so each is
finite; membership questions are answered by watching how a functional
behaves as the truncation level grows.

Without an explicit ``lam_grid`` the weak-Besov functionals return the
exact supremum over ``0 < lam <= 1``. The maps ``lam -> lam**r * count(lam)``
are step functions times an increasing power, so the supremum is the
left limit at one of the jump points (or the value at ``lam = 1``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import floor

import numpy as np

from .wavelet import ORIENTATIONS, CoefficientPyramid

__all__ = [
    "CoefficientSequence",
    "dyadic_grid",
    "strong_besov_functional",
    "weak_besov_local",
    "weak_besov_global",
    "weak_besov_global_energy",
    "sparse_counterexample",
    "pyramid_to_sequence",
]

D = 2
N_ORIENT = 2**D - 1


@dataclass
class CoefficientSequence:
    """Sparse wavelet coefficients ``c[j, k, eps]`` for ``j <= max_level``.

    ``entries[(j, eps)] = (ks, values)`` with ``ks`` an ``(m, 2)`` integer
    array of translation indices and ``eps`` in ``{1, 2, 3}``.
    """

    max_level: int
    entries: dict = field(default_factory=dict)

    def add(self, j: int, eps: int, ks, values) -> None:
        ks = np.asarray(ks, dtype=np.int64).reshape(-1, 2)
        values = np.asarray(values, dtype=float).ravel()
        if not 0 <= j <= self.max_level:
            raise ValueError(f"level {j} outside [0, {self.max_level}]")
        if eps not in range(1, N_ORIENT + 1):
            raise ValueError(f"orientation {eps} outside 1..{N_ORIENT}")
        if len(ks) != len(values):
            raise ValueError("index and value counts differ")
        if np.any((ks < 0) | (ks >= 2**j)):
            raise ValueError(f"translation index out of range at level {j}")
        if not np.all(np.isfinite(values)):
            raise ValueError("coefficients must be finite")
        if (j, eps) in self.entries:
            old_k, old_v = self.entries[(j, eps)]
            ks, values = np.vstack([old_k, ks]), np.concatenate([old_v, values])
        self.entries[(j, eps)] = (ks, values)

    def values(self) -> np.ndarray:
        parts = [v for _, v in self.entries.values()]
        return np.concatenate(parts) if parts else np.zeros(0)

    def block_energies(self):
        """``(levels, energies)`` per stored (level, orientation) block."""
        keys = sorted(self.entries)
        levels = np.array([j for j, _ in keys], dtype=np.int64)
        energies = np.array([np.sum(self.entries[k][1] ** 2) for k in keys])
        return levels, energies

    def level_energy(self) -> np.ndarray:
        """Sum of squares per level ``0..max_level``."""
        out = np.zeros(self.max_level + 1)
        levels, energies = self.block_energies()
        np.add.at(out, levels, energies)
        return out

    def scaled(self, t: float) -> "CoefficientSequence":
        return CoefficientSequence(
            self.max_level, {key: (ks, t * v) for key, (ks, v) in self.entries.items()}
        )


def dyadic_grid(m_max: int = 20) -> np.ndarray:
    """``{2**-m : m = 0..m_max}``."""
    return 2.0 ** -np.arange(m_max + 1)


def strong_besov_functional(seq: CoefficientSequence, s: float, J_max: int | None = None) -> float:
    """``max_{0 <= J <= J_max} 2**(2 J s) * sum_{j > J} sum_{k, eps} c**2``."""
    if s <= 0:
        raise ValueError("s must be positive")
    J_max = seq.max_level if J_max is None else J_max
    energy = seq.level_energy()
    if len(energy) <= J_max:
        energy = np.pad(energy, (0, J_max + 1 - len(energy)))
    energy = energy[: J_max + 1]
    # tail[J] = sum of energy over levels strictly above J
    tail = np.concatenate([np.cumsum(energy[::-1])[::-1][1:], [0.0]])
    J = np.arange(J_max + 1)
    return float(np.max(2.0 ** (2 * J * s) * tail))


def _sup_step(thresholds, weights, r, lam_grid):
    """``sup_lam lam**r * sum(weights[thresholds > lam])`` over (0, 1] or a grid."""
    thresholds = np.asarray(thresholds, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if lam_grid is not None:
        lam = np.asarray(lam_grid, dtype=float)
        if np.any((lam <= 0) | (lam > 1)):
            raise ValueError("lambda grid must lie in (0, 1]")
        if len(thresholds) == 0:
            return 0.0
        order = np.argsort(thresholds)
        t_sorted = thresholds[order]
        tail = np.concatenate([np.cumsum(weights[order][::-1])[::-1], [0.0]])
        above = tail[np.searchsorted(t_sorted, lam, side="right")]
        return float(np.max(lam**r * above))
    if len(thresholds) == 0:
        return 0.0
    best = float(np.sum(weights[thresholds > 1.0]))
    inside = thresholds <= 1.0
    if np.any(inside):
        order = np.argsort(-thresholds)
        t_desc = thresholds[order]
        at_least = np.cumsum(weights[order])
        # group ties so the cumulative weight counts every entry >= t
        last_of_group = np.r_[t_desc[1:] != t_desc[:-1], True]
        t_c, w_c = t_desc[last_of_group], at_least[last_of_group]
        keep = (t_c <= 1.0) & (t_c > 0)
        if np.any(keep):
            best = max(best, float(np.max(t_c[keep] ** r * w_c[keep])))
    return best


def weak_besov_local(seq: CoefficientSequence, r: float, lam_grid=None) -> float:
    """``sup_lam lam**r * #{(j, k, eps) : |c| > lam}``."""
    if not 0 < r < 2:
        raise ValueError("r must lie in (0, 2)")
    vals = np.abs(seq.values())
    return _sup_step(vals, np.ones_like(vals), r, lam_grid)


def weak_besov_global(seq: CoefficientSequence, r: float, lam_grid=None) -> float:
    """``sup_lam lam**r * sum_j 2**(d j) * #{eps : sum_k c**2 > 2**(d j) lam**2}``."""
    if not 0 < r < 2:
        raise ValueError("r must lie in (0, 2)")
    levels, energies = seq.block_energies()
    scale = 2.0 ** (D * levels)
    return _sup_step(np.sqrt(energies / scale), scale, r, lam_grid)


def weak_besov_global_energy(seq: CoefficientSequence, r: float, lam_grid) -> float:
    """``max_lam lam**(r-2) * sum of block energies with energy <= 2**(d j) lam**2``."""
    levels, energies = seq.block_energies()
    lam = np.asarray(lam_grid, dtype=float)
    scale = 2.0 ** (D * levels)
    small = energies[None, :] <= scale[None, :] * lam[:, None] ** 2
    return float(np.max(lam ** (r - 2) * (small * energies[None, :]).sum(axis=1)))


def sparse_counterexample(alpha: float, s: float, d: int = 2, J_max: int = 10) -> CoefficientSequence:
    """Sparse sequence in the strong and local weak spaces but not the global one.

    At each level j and orientation, the first ``floor(2**(2 d alpha j / (2s + d)))``
    translations (lexicographic) carry ``2**(-alpha j) / (2**d - 1)``; the rest are 0.
    """
    if d != D:
        raise ValueError("only d = 2 is supported")
    if not d / 2 <= alpha < s + d / 2:
        raise ValueError(f"need d/2 <= alpha < s + d/2, got alpha={alpha}, s={s}, d={d}")
    seq = CoefficientSequence(J_max)
    rate = 2 * d * alpha / (2 * s + d)
    for j in range(J_max + 1):
        count = floor(2.0 ** (rate * j) + 1e-9)
        value = 2.0 ** (-alpha * j) / (2**d - 1)
        i = np.arange(count)
        ks = np.column_stack([i // 2**j, i % 2**j])
        for eps in range(1, N_ORIENT + 1):
            seq.add(j, eps, ks, np.full(count, value))
    return seq


def pyramid_to_sequence(pyramid: CoefficientPyramid) -> CoefficientSequence:
    """Nonzero detail coefficients of a pyramid; the approximation block is dropped."""
    seq = CoefficientSequence(max(pyramid.max_level - 1, 0))
    for j, name, block in pyramid.blocks():
        k1, k2 = np.nonzero(block)
        if len(k1):
            seq.add(j, ORIENTATIONS.index(name) + 1, np.column_stack([k1, k2]), block[k1, k2])
    return seq
