"""Daubechies filters, dyadic point values of phi/psi and periodic 2D transforms.

Conventions
-----------
The scaling function satisfies ``phi(x) = sqrt(2) * sum_k h[k] phi(2x - k)``
and the wavelet ``psi(x) = sqrt(2) * sum_k g[k] phi(2x - k)`` with
``g[k] = (-1)**k * h[L - k]``, so both are supported on ``[0, L]``.

One analysis step maps scaling coefficients ``c`` at level ``j + 1`` to

    a[k] = sum_i h[i] c[(2k + i) mod 2**(j+1)]
    d[k] = sum_i g[i] c[(2k + i) mod 2**(j+1)]

which are exactly the inner products against the periodized
``phi_{j,k}`` and ``psi_{j,k}``.

In 2D, axis 0 of a coefficient matrix indexes the first coordinate ``u``
and axis 1 the second coordinate ``v``. Detail orientations are named by
the filter applied along (u, v): ``"HL"`` is wavelet in u and scaling in v,
``"LH"`` the reverse and ``"HH"`` wavelet in both.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

__all__ = [
    "ORIENTATIONS",
    "WaveletSpec",
    "DyadicFunctionTable",
    "CoefficientPyramid",
    "daubechies_filter",
    "cascade_eval",
    "eval_scaling",
    "dwt2_periodic",
    "idwt2_periodic",
]

ORIENTATIONS = ("HL", "LH", "HH")
# orientation -> (epsilon_u, epsilon_v)
EPSILON = {"HL": (1, 0), "LH": (0, 1), "HH": (1, 1)}

MAX_ORDER = 10


@dataclass(frozen=True)
class WaveletSpec:
    """Orthonormal compactly supported wavelet given by its lowpass filter."""

    order: int
    lowpass: np.ndarray

    @property
    def support_length(self) -> int:
        return len(self.lowpass) - 1

    @property
    def highpass(self) -> np.ndarray:
        h = self.lowpass
        L = self.support_length
        return np.array([(-1) ** k * h[L - k] for k in range(L + 1)])


def daubechies_filter(order: int = 4) -> WaveletSpec:
    """Extremal-phase Daubechies filter with `order` vanishing moments.

    The filter is obtained by spectral factorization: the roots of the
    Daubechies polynomial ``P(y) = sum_k C(p-1+k, k) y**k`` are mapped to
    ``z`` through ``y = -(z - 1)**2 / (4z)`` and the roots inside the unit
    circle are kept.

    Parameters
    ----------
    order : int
        Number of vanishing moments ``p``, between 1 and 10. Order 1 is Haar.

    Returns
    -------
    WaveletSpec
        Filter with ``2p`` taps summing to ``sqrt(2)``.
    """
    if not isinstance(order, (int, np.integer)) or not 1 <= order <= MAX_ORDER:
        raise ValueError(
            f"unsupported Daubechies order {order!r}; supported orders are 1..{MAX_ORDER}"
        )
    p = int(order)
    poly = [comb(p - 1 + k, k) for k in range(p)]
    zeros = []
    for y in np.roots(poly[::-1]) if p > 1 else []:
        z = np.roots([1.0, 4.0 * y - 2.0, 1.0])
        zeros.append(z[np.argmin(np.abs(z))])
    q = np.real(np.poly(zeros)) if zeros else np.array([1.0])
    h = np.convolve(np.poly([-1.0] * p), q)
    h = h / h.sum() * np.sqrt(2.0)
    h.setflags(write=False)
    return WaveletSpec(order=p, lowpass=h)


@dataclass(frozen=True)
class DyadicFunctionTable:
    """Values of phi and psi at the dyadic points ``m / 2**refinement``.

    Both arrays have ``L * 2**refinement + 1`` entries covering ``[0, L]``.
    """

    refinement: int
    support_length: int
    phi_values: np.ndarray
    psi_values: np.ndarray

    @property
    def step(self) -> float:
        return 2.0 ** -self.refinement

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(len(self.phi_values)) * self.step

    def phi(self, t):
        """phi at arbitrary real points, linearly interpolated, 0 off ``[0, L)``."""
        return self._interp(self.phi_values, t)

    def psi(self, t):
        return self._interp(self.psi_values, t)

    def _interp(self, values, t):
        t = np.asarray(t, dtype=float)
        pos = t * 2.0**self.refinement
        out = np.zeros_like(pos)
        inside = (pos >= 0) & (pos < len(values) - 1)
        p = pos[inside]
        i = np.floor(p).astype(np.int64)
        w = p - i
        out[inside] = (1.0 - w) * values[i] + w * values[i + 1]
        return out if out.ndim else float(out)


def _integer_values(spec: WaveletSpec) -> np.ndarray:
    """phi at the integers 0..L from the two-scale eigenproblem."""
    h = spec.lowpass
    L = spec.support_length
    values = np.zeros(L + 1)
    if L == 1:
        # Haar: right-continuous indicator of [0, 1)
        values[0] = 1.0
        return values
    idx = np.arange(1, L)
    two_i_minus_j = 2 * idx[:, None] - idx[None, :]
    valid = (two_i_minus_j >= 0) & (two_i_minus_j <= L)
    M = np.where(valid, np.sqrt(2.0) * h[np.clip(two_i_minus_j, 0, L)], 0.0)
    eigval, eigvec = np.linalg.eig(M)
    best = np.argmin(np.abs(eigval - 1.0))
    if abs(eigval[best] - 1.0) > 1e-8:
        raise ValueError("two-scale matrix has no eigenvalue 1; filter is degenerate")
    v = np.real(eigvec[:, best])
    total = v.sum()
    if abs(total) < 1e-12:
        raise ValueError("eigenvector of the two-scale matrix sums to zero; cascade does not converge")
    values[1:L] = v / total
    return values


def _refine(values: np.ndarray, coeffs: np.ndarray, level: int, L: int) -> np.ndarray:
    """Apply ``f(x) = sqrt(2) sum_k coeffs[k] phi(2x - k)`` on the next dyadic grid.

    `values` holds phi on the grid of step ``2**-(level - 1)``.
    """
    half = 2 ** (level - 1)
    m = np.arange(L * 2**level + 1)
    out = np.zeros(len(m))
    for k, c in enumerate(coeffs):
        src = m - k * half
        ok = (src >= 0) & (src < len(values))
        out[ok] += c * values[src[ok]]
    return np.sqrt(2.0) * out


def cascade_eval(spec: WaveletSpec, refinement: int = 10) -> DyadicFunctionTable:
    """Tabulate phi and psi at ``m / 2**refinement`` by iterating the two-scale relation."""
    if refinement < 1:
        raise ValueError("refinement must be >= 1")
    L = spec.support_length
    phi = _integer_values(spec)
    psi = None
    for level in range(1, refinement + 1):
        if level == refinement:
            psi = _refine(phi, spec.highpass, level, L)
        phi = _refine(phi, spec.lowpass, level, L)
    phi.setflags(write=False)
    psi.setflags(write=False)
    return DyadicFunctionTable(refinement, L, phi, psi)


def eval_scaling(table: DyadicFunctionTable, j: int, k: int, x):
    """``2**(j/2) * phi(2**j x - k)``; zero outside the support."""
    return 2.0 ** (j / 2.0) * table.phi(2.0**j * np.asarray(x, dtype=float) - k)


@dataclass
class CoefficientPyramid:
    """Scaling coefficients at `coarse_level` plus details up to ``max_level - 1``.

    ``details[j][name]`` is a ``2**j x 2**j`` array for ``coarse_level <= j < max_level``.
    """

    coarse_level: int
    max_level: int
    approx: np.ndarray
    details: dict = field(default_factory=dict)

    def copy(self) -> "CoefficientPyramid":
        return CoefficientPyramid(
            self.coarse_level,
            self.max_level,
            self.approx.copy(),
            {j: {e: b.copy() for e, b in blocks.items()} for j, blocks in self.details.items()},
        )

    def blocks(self):
        """Yield ``(j, orientation, array)`` for every detail block, coarse to fine."""
        for j in sorted(self.details):
            for name in ORIENTATIONS:
                yield j, name, self.details[j][name]

    def detail_vector(self) -> np.ndarray:
        parts = [b.ravel() for _, _, b in self.blocks()]
        return np.concatenate(parts) if parts else np.zeros(0)

    def validate(self) -> None:
        n0 = 2**self.coarse_level
        if self.approx.shape != (n0, n0):
            raise ValueError(
                f"approx block has shape {self.approx.shape}, expected {(n0, n0)}"
            )
        expected = set(range(self.coarse_level, self.max_level))
        if set(self.details) != expected:
            raise ValueError(f"detail levels {sorted(self.details)} != {sorted(expected)}")
        for j, name, block in self.blocks():
            if block.shape != (2**j, 2**j):
                raise ValueError(f"level {j} block {name} has shape {block.shape}")


def _analysis(c: np.ndarray, filt: np.ndarray, axis: int) -> np.ndarray:
    n = c.shape[axis]
    base = 2 * np.arange(n // 2)
    out = 0.0
    for i, f in enumerate(filt):
        out = out + f * np.take(c, (base + i) % n, axis=axis)
    return out


def _synthesis(a: np.ndarray, d: np.ndarray, h: np.ndarray, g: np.ndarray, axis: int) -> np.ndarray:
    a = np.moveaxis(a, axis, 0)
    d = np.moveaxis(d, axis, 0)
    half = a.shape[0]
    n = 2 * half
    out = np.zeros((n,) + a.shape[1:])
    base = 2 * np.arange(half)
    for i in range(len(h)):
        # each index appears once per tap since base is a stride-2 sweep
        out[(base + i) % n] += h[i] * a + g[i] * d
    return np.moveaxis(out, 0, axis)


def _side_level(matrix: np.ndarray) -> int:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
    side = matrix.shape[0]
    if side < 1 or side & (side - 1):
        raise ValueError(f"matrix side {side} is not a power of two")
    return side.bit_length() - 1


def dwt2_periodic(matrix, spec: WaveletSpec, coarse: int = 0) -> CoefficientPyramid:
    """Separable periodic analysis from level ``log2(side)`` down to `coarse`."""
    c = np.asarray(matrix, dtype=float)
    J = _side_level(c)
    if coarse < 0 or coarse > J:
        raise ValueError(f"coarse level {coarse} outside [0, {J}]")
    h, g = spec.lowpass, spec.highpass
    details = {}
    for j in range(J - 1, coarse - 1, -1):
        lo = _analysis(c, h, axis=0)
        hi = _analysis(c, g, axis=0)
        details[j] = {
            "HL": _analysis(hi, h, axis=1),
            "LH": _analysis(lo, g, axis=1),
            "HH": _analysis(hi, g, axis=1),
        }
        c = _analysis(lo, h, axis=1)
    return CoefficientPyramid(coarse, J, c, details)


def idwt2_periodic(pyramid: CoefficientPyramid, spec: WaveletSpec) -> np.ndarray:
    """Inverse of :func:`dwt2_periodic`; returns the ``2**max_level`` square matrix."""
    pyramid.validate()
    h, g = spec.lowpass, spec.highpass
    c = np.asarray(pyramid.approx, dtype=float)
    for j in range(pyramid.coarse_level, pyramid.max_level):
        blk = pyramid.details[j]
        lo = _synthesis(c, blk["LH"], h, g, axis=1)
        hi = _synthesis(blk["HL"], blk["HH"], h, g, axis=1)
        c = _synthesis(lo, hi, h, g, axis=0)
    return c
