"""Bivariate parametric copulas: samplers, closed-form densities, margins."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate, special, stats

__all__ = [
    "CopulaModel",
    "MarginSpec",
    "FAMILIES",
    "make_model",
    "sample",
    "density",
    "density_on_grid",
    "kendall_tau",
    "empirical_kendall_tau",
    "apply_margins",
]

FAMILIES = ("independence", "fgm", "gaussian", "student", "clayton", "frank", "gumbel")


@dataclass(frozen=True)
class CopulaModel:
    """A family name plus its parameters.

    ======================  ===============================
    family                  params
    ======================  ===============================
    ``independence``        ``()``
    ``fgm``                 ``(theta,)``, ``-1 <= theta <= 1``
    ``gaussian``            ``(rho,)``, ``-1 < rho < 1``
    ``student``             ``(rho, nu)``, ``nu >= 1``
    ``clayton``             ``(theta,)``, ``theta >= 0`` (0 is independence)
    ``frank``               ``(theta,)``, any real (0 is independence)
    ``gumbel``              ``(theta,)``, ``theta >= 1``
    ======================  ===============================
    """

    family: str
    params: tuple = ()

    def __post_init__(self):
        fam = self.family.lower()
        object.__setattr__(self, "family", fam)
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if fam not in FAMILIES:
            raise ValueError(f"unknown copula family {self.family!r}; choose from {FAMILIES}")
        expected = {"independence": 0, "student": 2}.get(fam, 1)
        if len(self.params) != expected:
            raise ValueError(f"{fam} takes {expected} parameter(s), got {len(self.params)}")
        p = self.params
        bad = {
            "fgm": lambda: not -1.0 <= p[0] <= 1.0,
            "gaussian": lambda: not -1.0 < p[0] < 1.0,
            "student": lambda: not (-1.0 < p[0] < 1.0 and p[1] >= 1.0),
            "clayton": lambda: not p[0] >= 0.0,
            "frank": lambda: not np.isfinite(p[0]),
            "gumbel": lambda: not p[0] >= 1.0,
        }.get(fam, lambda: False)
        if bad():
            raise ValueError(f"invalid parameters {p} for the {fam} copula")

    def __str__(self):
        if not self.params:
            return self.family
        return f"{self.family}({','.join(f'{x:g}' for x in self.params)})"


def make_model(family: str, *params) -> CopulaModel:
    return CopulaModel(family, tuple(params))


@dataclass(frozen=True)
class MarginSpec:
    """``uniform``, ``exponential`` (with `rate`) or ``gaussian`` (standard normal)."""

    kind: str = "uniform"
    rate: float = 1.0

    def __post_init__(self):
        if self.kind not in ("uniform", "exponential", "gaussian"):
            raise ValueError(f"unknown margin {self.kind!r}")
        if self.kind == "exponential" and not self.rate > 0:
            raise ValueError("exponential rate must be positive")

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        if self.kind == "uniform":
            return u
        if self.kind == "exponential":
            return -np.log1p(-u) / self.rate
        return special.ndtri(u)


def apply_margins(uniform_sample, margins=(MarginSpec(), MarginSpec())) -> np.ndarray:
    """Push each uniform column through its margin's quantile function."""
    u = np.asarray(uniform_sample, dtype=float)
    return np.column_stack([m.quantile(u[:, i]) for i, m in enumerate(margins)])


# --- sampling -------------------------------------------------------------


def _positive_stable(alpha, size, rng):
    """Positive stable draws with Laplace transform ``exp(-t**alpha)`` (Kanter / CMS)."""
    if alpha == 1.0:
        return np.ones(size)
    v = rng.uniform(0.0, np.pi, size)
    w = rng.exponential(1.0, size)
    return (np.sin(alpha * v) / np.sin(v) ** (1.0 / alpha)) * (
        np.sin((1.0 - alpha) * v) / w
    ) ** ((1.0 - alpha) / alpha)


def sample(model: CopulaModel, n: int, rng=None) -> np.ndarray:
    """Draw `n` i.i.d. points of `model` on ``[0, 1]**2``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(rng)
    fam, p = model.family, model.params

    if fam == "independence" or (fam in ("clayton", "frank") and p[0] == 0.0):
        return rng.uniform(size=(n, 2))
    if fam == "gaussian":
        z = rng.standard_normal((n, 2))
        z[:, 1] = p[0] * z[:, 0] + np.sqrt(1.0 - p[0] ** 2) * z[:, 1]
        return special.ndtr(z)
    if fam == "student":
        rho, nu = p
        z = rng.standard_normal((n, 2))
        z[:, 1] = rho * z[:, 0] + np.sqrt(1.0 - rho**2) * z[:, 1]
        w = np.sqrt(rng.chisquare(nu, n) / nu)
        return special.stdtr(nu, z / w[:, None])
    if fam == "clayton":
        theta = p[0]
        frailty = rng.gamma(1.0 / theta, 1.0, n)
        e = rng.exponential(1.0, (n, 2))
        return (1.0 + e / frailty[:, None]) ** (-1.0 / theta)
    if fam == "gumbel":
        theta = p[0]
        s = _positive_stable(1.0 / theta, n, rng)
        e = rng.exponential(1.0, (n, 2))
        return np.exp(-((e / s[:, None]) ** (1.0 / theta)))

    u = rng.uniform(size=n)
    w = rng.uniform(size=n)
    if fam == "frank":
        theta = p[0]
        # conditional inverse of dC/du
        v = -np.log1p(w * np.expm1(-theta) / (w + (1.0 - w) * np.exp(-theta * u))) / theta
        return np.column_stack([u, v])
    # fgm: dC/du = v + a v (1 - v) with a = theta (1 - 2u); solve the quadratic
    a = p[0] * (1.0 - 2.0 * u)
    with np.errstate(divide="ignore", invalid="ignore"):
        root = (1.0 + a - np.sqrt((1.0 + a) ** 2 - 4.0 * a * w)) / (2.0 * a)
    v = np.where(np.abs(a) < 1e-12, w, root)
    return np.column_stack([u, v])


# --- densities ------------------------------------------------------------


def density(model: CopulaModel, u, v=None):
    """Closed-form copula density at ``(u, v)`` strictly inside the unit square.

    Accepts either two broadcastable arrays or a single ``(..., 2)`` array.
    """
    if v is None:
        pts = np.asarray(u, dtype=float)
        u, v = pts[..., 0], pts[..., 1]
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    fam, p = model.family, model.params

    if (
        fam == "independence"
        or (fam in ("clayton", "frank", "gaussian") and p[0] == 0.0)
        or (fam == "gumbel" and p[0] == 1.0)
    ):
        return np.ones(np.broadcast(u, v).shape)
    if fam == "fgm":
        return 1.0 + p[0] * (1.0 - 2.0 * u) * (1.0 - 2.0 * v)
    if fam == "gaussian":
        rho = p[0]
        x, y = special.ndtri(u), special.ndtri(v)
        r2 = 1.0 - rho**2
        return np.exp(-(rho**2 * (x**2 + y**2) - 2.0 * rho * x * y) / (2.0 * r2)) / np.sqrt(r2)
    if fam == "student":
        return _student_density(u, v, *p)
    if fam == "clayton":
        theta = p[0]
        s = u ** (-theta) + v ** (-theta) - 1.0
        return (1.0 + theta) * (u * v) ** (-theta - 1.0) * s ** (-2.0 - 1.0 / theta)
    if fam == "frank":
        theta = p[0]
        num = -theta * np.expm1(-theta) * np.exp(-theta * (u + v))
        den = np.expm1(-theta) + np.expm1(-theta * u) * np.expm1(-theta * v)
        return num / den**2
    # gumbel
    theta = p[0]
    x, y = -np.log(u), -np.log(v)
    s = x**theta + y**theta
    a = s ** (1.0 / theta)
    return np.exp(-a) / (u * v) * (x * y) ** (theta - 1.0) * s ** (1.0 / theta - 2.0) * (a + theta - 1.0)


def _student_density(u, v, rho, nu, x=None, y=None):
    if x is None:
        x, y = special.stdtrit(nu, u), special.stdtrit(nu, v)
    r2 = 1.0 - rho**2
    log_c = (
        special.gammaln((nu + 2.0) / 2.0)
        + special.gammaln(nu / 2.0)
        - 2.0 * special.gammaln((nu + 1.0) / 2.0)
        - 0.5 * np.log(r2)
        - (nu + 2.0) / 2.0 * np.log1p((x**2 + y**2 - 2.0 * rho * x * y) / (nu * r2))
        + (nu + 1.0) / 2.0 * (np.log1p(x**2 / nu) + np.log1p(y**2 / nu))
    )
    return np.exp(log_c)


def density_on_grid(model: CopulaModel, n_side: int) -> np.ndarray:
    """Density at the cell centres of an ``n_side`` grid, indexed ``[iv, iu]``."""
    c = (np.arange(n_side) + 0.5) / n_side
    uu, vv = np.meshgrid(c, c)
    return density(model, uu, vv)


def _debye1(theta):
    if theta == 0.0:
        return 1.0
    val, _ = integrate.quad(lambda t: t / np.expm1(t) if t else 1.0, 0.0, abs(theta))
    d = val / abs(theta)
    # D1(-x) = D1(x) + x/2
    return d if theta > 0 else d + abs(theta) / 2.0


def kendall_tau(model: CopulaModel) -> float:
    """Population Kendall's tau from the family's closed form."""
    fam, p = model.family, model.params
    if fam == "independence":
        return 0.0
    if fam in ("gaussian", "student"):
        return 2.0 / np.pi * np.arcsin(p[0])
    if fam == "clayton":
        return p[0] / (p[0] + 2.0)
    if fam == "gumbel":
        return 1.0 - 1.0 / p[0]
    if fam == "fgm":
        return 2.0 * p[0] / 9.0
    theta = p[0]
    if theta == 0.0:
        return 0.0
    return 1.0 - 4.0 / theta * (1.0 - _debye1(theta))


def empirical_kendall_tau(points) -> float:
    pts = np.asarray(points, dtype=float)
    return float(stats.kendalltau(pts[:, 0], pts[:, 1]).statistic)
