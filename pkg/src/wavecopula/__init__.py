"""Wavelet estimation of copula densities from ranks, with hard local and
global thresholding, parametric benchmark fitting and Besov diagnostics."""
from .copulas import CopulaModel, MarginSpec, apply_margins, density, make_model, sample
from .estimator import Boundary, DensityGrid, EstimatorConfig, Rule, estimate
from .fitting import best_family, fit_class, parametric_classes
from .metrics import grid_norm, monte_carlo_bench, relative_error

__version__ = "0.1.0"

__all__ = [
    "Boundary",
    "CopulaModel",
    "DensityGrid",
    "EstimatorConfig",
    "MarginSpec",
    "Rule",
    "apply_margins",
    "best_family",
    "density",
    "estimate",
    "fit_class",
    "grid_norm",
    "make_model",
    "monte_carlo_bench",
    "parametric_classes",
    "relative_error",
    "sample",
]
