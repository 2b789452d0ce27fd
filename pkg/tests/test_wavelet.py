import numpy as np
import pytest
from numpy.testing import assert_allclose

from wavecopula.wavelet import (
    CoefficientPyramid,
    cascade_eval,
    daubechies_filter,
    dwt2_periodic,
    eval_scaling,
    idwt2_periodic,
)


@pytest.fixture(scope="module")
def db2_table():
    return cascade_eval(daubechies_filter(2), 10)


@pytest.mark.parametrize("order", range(1, 11))
def test_filter_invariants(order):
    spec = daubechies_filter(order)
    h = spec.lowpass
    assert len(h) == 2 * order
    assert spec.support_length == 2 * order - 1
    assert abs(h.sum() - np.sqrt(2)) < 1e-12
    for m in range(order):
        shifted = np.sum(h[: len(h) - 2 * m] * h[2 * m:])
        assert abs(shifted - (1.0 if m == 0 else 0.0)) < 1e-12


@pytest.mark.parametrize("order", [2, 4, 7])
def test_vanishing_moments(order):
    g = daubechies_filter(order).highpass
    k = np.arange(len(g), dtype=float)
    for m in range(order):
        assert abs(np.sum(g * k**m)) < 1e-7 * max(1.0, np.sum(np.abs(g) * k**m))


def test_haar_and_db2_taps():
    assert_allclose(daubechies_filter(1).lowpass, [1 / np.sqrt(2)] * 2, atol=1e-15)
    h = daubechies_filter(2).lowpass
    assert abs(np.sum(h**2) - 1) < 1e-12
    r3 = np.sqrt(3)
    assert_allclose(h, np.array([1 + r3, 3 + r3, 3 - r3, 1 - r3]) / (4 * np.sqrt(2)), atol=1e-12)


@pytest.mark.parametrize("bad", [0, 11, -1, 2.5])
def test_unsupported_order(bad):
    with pytest.raises(ValueError, match="1..10"):
        daubechies_filter(bad)


def test_haar_cascade():
    t = cascade_eval(daubechies_filter(1), 3)
    assert_allclose(t.phi_values, [1.0] * 8 + [0.0])
    assert_allclose(t.psi_values, [1.0] * 4 + [-1.0] * 4 + [0.0])


def test_cascade_rejects_bad_refinement():
    with pytest.raises(ValueError):
        cascade_eval(daubechies_filter(2), 0)


def test_degenerate_filter_rejected():
    from wavecopula.wavelet import WaveletSpec

    bogus = WaveletSpec(order=2, lowpass=np.array([0.0, 0.0, 0.0, 0.0]))
    with pytest.raises(ValueError):
        cascade_eval(bogus, 3)


def test_partition_of_unity_db2(db2_table):
    x = np.arange(2**10) / 2**10
    total = sum(db2_table.phi(x + k) for k in range(db2_table.support_length + 1))
    assert np.max(np.abs(total - 1)) < 1e-8


@pytest.mark.parametrize("order", [1, 2, 4])
def test_riemann_integrals(order):
    t = cascade_eval(daubechies_filter(order), 10)
    assert abs(t.phi_values.sum() * t.step - 1) < 1e-6
    assert abs(t.psi_values.sum() * t.step) < 1e-6


def test_cascade_convergence_db2():
    # error of the linear interpolant of phi_r against phi_{r+1}
    spec = daubechies_filter(2)
    gaps = []
    for r in range(3, 10):
        coarse, fine = cascade_eval(spec, r), cascade_eval(spec, r + 1)
        gaps.append(np.max(np.abs(coarse.phi(fine.nodes) - fine.phi_values)))
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_eval_scaling_haar():
    t = cascade_eval(daubechies_filter(1), 10)
    assert eval_scaling(t, 0, 0, 0.5) == pytest.approx(1.0)
    assert eval_scaling(t, 2, 1, 0.3) == pytest.approx(2.0)
    assert eval_scaling(t, 2, 1, 0.9) == 0.0


def test_eval_scaling_refinement_oracle(db2_table):
    # cascade values are exact on shared dyadic nodes; between them db2 is only Holder ~0.55
    fine = cascade_eval(daubechies_filter(2), 16)
    nodes = np.arange(2**13 + 1) / 2**13
    assert np.max(np.abs(eval_scaling(db2_table, 3, 2, nodes) - eval_scaling(fine, 3, 2, nodes))) < 1e-9
    x = np.linspace(0, 1, 1001)
    assert np.max(np.abs(eval_scaling(db2_table, 3, 2, x) - eval_scaling(fine, 3, 2, x))) < 2e-2


def test_dwt_all_ones_haar():
    p = dwt2_periodic(np.ones((2, 2)), daubechies_filter(1), 0)
    assert_allclose(p.approx, [[2.0]])
    for _, _, block in p.blocks():
        assert_allclose(block, 0.0)


def test_dwt_convention_vector():
    # h = g-reversed Haar with g = (h1, -h0): the (0,0) impulse sees +h0 * +g0 on every orientation
    p = dwt2_periodic(np.array([[1.0, 0.0], [0.0, 0.0]]), daubechies_filter(1), 0)
    assert_allclose(p.approx, [[0.5]])
    for name in ("HL", "LH", "HH"):
        assert_allclose(p.details[0][name], [[0.5]])
    q = dwt2_periodic(np.array([[0.0, 0.0], [0.0, 1.0]]), daubechies_filter(1), 0)
    assert_allclose([q.details[0][n][0, 0] for n in ("HL", "LH", "HH")], [-0.5, -0.5, 0.5])


def test_inverse_of_trivial_pyramids():
    spec = daubechies_filter(1)
    p = CoefficientPyramid(0, 1, np.array([[2.0]]), {0: {n: np.zeros((1, 1)) for n in ("HL", "LH", "HH")}})
    assert_allclose(idwt2_periodic(p, spec), np.ones((2, 2)))
    z = dwt2_periodic(np.zeros((8, 8)), daubechies_filter(4), 1)
    assert_allclose(idwt2_periodic(z, daubechies_filter(4)), 0.0)


@pytest.mark.parametrize("side", [2, 4, 8, 16, 32, 64])
@pytest.mark.parametrize("order", [1, 2, 4])
def test_perfect_reconstruction_and_parseval(side, order):
    rng = np.random.default_rng(side * 10 + order)
    m = rng.normal(size=(side, side))
    spec = daubechies_filter(order)
    for coarse in {0, side.bit_length() // 2}:
        p = dwt2_periodic(m, spec, coarse)
        assert p.approx.size + p.detail_vector().size == m.size
        assert np.max(np.abs(idwt2_periodic(p, spec) - m)) < 1e-10
        energy = np.sqrt(np.sum(p.approx**2) + np.sum(p.detail_vector() ** 2))
        assert abs(energy / np.linalg.norm(m) - 1) < 1e-10


def test_forward_of_inverse_reproduces_pyramid():
    spec = daubechies_filter(4)
    rng = np.random.default_rng(5)
    p = dwt2_periodic(rng.normal(size=(16, 16)), spec, 1)
    again = dwt2_periodic(idwt2_periodic(p, spec), spec, 1)
    assert np.max(np.abs(again.approx - p.approx)) < 1e-10
    assert np.max(np.abs(again.detail_vector() - p.detail_vector())) < 1e-10


def test_non_power_of_two_rejected():
    with pytest.raises(ValueError, match="power of two"):
        dwt2_periodic(np.ones((6, 6)), daubechies_filter(1))


def test_level_shape_mismatch_rejected():
    spec = daubechies_filter(2)
    p = dwt2_periodic(np.ones((8, 8)), spec, 1)
    p.details[2]["HH"] = np.zeros((3, 3))
    with pytest.raises(ValueError):
        idwt2_periodic(p, spec)


def test_detail_coefficient_matches_basis_inner_product():
    # dwt of level-J scaling coefficients == inner product with psi_{j,k} built from the two-scale relation
    spec = daubechies_filter(2)
    t = cascade_eval(spec, 12)
    x = (np.arange(2**12) + 0.5) / 2**12
    f = np.cos(2 * np.pi * x) + 0.3 * np.sin(6 * np.pi * x)
    J = 4
    phi = np.array([sum(eval_scaling(t, J, k, x + m) for m in range(-3, 4)) for k in range(2**J)])
    c = phi @ f / len(x)
    psi = np.array(
        [sum(2 ** ((J - 1) / 2) * t.psi(2 ** (J - 1) * (x + m) - k) for m in range(-3, 4)) for k in range(2 ** (J - 1))]
    )
    d_direct = psi @ f / len(x)
    p = dwt2_periodic(np.outer(c, c), spec, J - 1)
    # separable: HL block = d (x) a
    a = phi[:, :] @ f / len(x)
    lo = np.array([sum(spec.lowpass[i] * a[(2 * k + i) % 2**J] for i in range(4)) for k in range(2 ** (J - 1))])
    assert_allclose(p.details[J - 1]["HL"], np.outer(d_direct, lo), atol=1e-5)
