import numpy as np
import pytest

from wavecopula.copulas import CopulaModel, density_on_grid
from wavecopula.estimator import DensityGrid
from wavecopula.fitting import (
    ParametricClass,
    best_family,
    fit_class,
    fit_table,
    fit_table_to_csv,
    parametric_classes,
)


def _coarse():
    # a small lattice that still contains 0 and the test parameters
    rho = np.round(np.arange(-9, 10) / 10, 10)
    student = np.array([(r, v) for r in rho for v in (1.0, 2.0, 3.0, 10.0)])
    col = lambda a: np.round(a, 10)[:, None]
    return [
        ParametricClass(1, "gaussian", rho[:, None]),
        ParametricClass(2, "student", student),
        ParametricClass(3, "gumbel", col(np.arange(10, 21) / 10)),
        ParametricClass(4, "clayton", col(np.arange(0, 21) / 10)),
        ParametricClass(5, "frank", col(np.arange(-20, 21) / 10)),
    ]


COARSE = _coarse()


def test_lattice_sizes():
    sizes = {c.family: len(c) for c in parametric_classes()}
    assert sizes == {"gaussian": 199, "student": 19900, "gumbel": 101, "clayton": 201, "frank": 401}
    assert [c.index for c in parametric_classes()] == [1, 2, 3, 4, 5]
    frank = parametric_classes()[4].lattice[:, 0]
    assert frank[0] == -2.0 and frank[-1] == 2.0 and 0.0 in frank
    # a step that does not divide the range never overshoots
    rho = parametric_classes(step=0.1)[0].lattice[:, 0]
    assert rho[-1] <= 0.99


@pytest.mark.parametrize(
    "model",
    [CopulaModel("gaussian", (0.5,)), CopulaModel("clayton", (1.2,)), CopulaModel("frank", (-1.7,)),
     CopulaModel("gumbel", (1.4,)), CopulaModel("student", (0.3, 3.0))],
    ids=str,
)
def test_exact_lattice_points_recovered(model):
    fit = best_family(density_on_grid(model, 16), q=2, classes=COARSE)
    assert fit.winner.family == model.family
    assert np.allclose(fit.winner.theta, model.params)
    assert fit.winner.error == pytest.approx(0.0, abs=1e-12)
    assert fit.relative_error_percent == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("model", [CopulaModel("clayton", (0.0,)), CopulaModel("frank", (0.0,)),
                                   CopulaModel("gumbel", (1.0,))], ids=str)
def test_independence_ties_resolve_to_gaussian_zero(model):
    fit = best_family(density_on_grid(model, 16), q=2, classes=COARSE)
    assert fit.winner.family == "gaussian" and fit.winner.theta == (0.0,)


def test_tie_break_prefers_small_nu():
    # at rho = 0 and large nu the student is nearly independent; gaussian still wins the class tie
    fit = best_family(np.ones((16, 16)), q=1, classes=COARSE)
    student = next(f for f in fit.fits if f.family == "student")
    assert student.theta[0] == 0.0


def test_fit_class_between_lattice_points():
    cls = COARSE[3]
    theta, err = fit_class(density_on_grid(CopulaModel("clayton", (1.23,)), 16), cls, 2)
    assert theta == (1.2,) and err > 0


def test_density_grid_input_and_non_finite():
    g = DensityGrid(density_on_grid(CopulaModel("frank", (1.0,)), 8))
    assert best_family(g, 1, COARSE).winner.family == "frank"
    bad = np.ones((8, 8))
    bad[2, 2] = np.nan
    with pytest.raises(ValueError):
        fit_class(bad, COARSE[0], 2)


def test_fit_table_csv():
    results = fit_table(density_on_grid(CopulaModel("gaussian", (0.5,)), 8), (1, 2, np.inf), COARSE)
    lines = fit_table_to_csv(results).splitlines()
    assert lines[0] == "family,theta_1,E_1,theta_2,E_2,theta_inf,E_inf"
    assert [ln.split(",")[0] for ln in lines[1:]] == ["gaussian", "student", "gumbel", "clayton", "frank", "best"]
    assert lines[-1].startswith("best,gaussian:0.50,0.00%")
    assert lines[2].startswith('student,"(0.50,')
