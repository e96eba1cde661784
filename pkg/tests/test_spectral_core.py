import numpy as np
import pytest
from scipy.integrate import quad

from synclimits.errors import ModelInconsistent, NonFiniteIntegrand
from synclimits.models import SrrcPamModel, composite_model
from synclimits.spectral_core import (
    FrequencyGrid,
    FunctionModel,
    QuadratureSpec,
    WhiteNoiseModel,
    assemble_cyclic_psd_matrix,
    assemble_matrices,
    integrate_subband,
    integrate_values,
    spectral_correlation,
    validate_psd,
)


def test_grid_nodes_are_midpoints():
    g = FrequencyGrid(4, 8)
    assert g.step == pytest.approx(1 / 32)
    np.testing.assert_allclose(g.sigma_nodes, (np.arange(8) + 0.5) / 32)
    lam = g.lambda_nodes
    assert lam.size == 32
    np.testing.assert_allclose(np.sort(lam), (np.arange(32) + 0.5) / 32)
    # sub-band major: first block is sub-band 0
    assert lam[:8].max() < 0.25 <= lam[8:16].min()


@pytest.mark.parametrize("bad", [0, -2, 2.5])
def test_grid_rejects_bad_period(bad):
    with pytest.raises(ValueError):
        FrequencyGrid(bad, 16)


def test_quadrature_spec_minimum_points():
    assert QuadratureSpec(points=16).grid(4).points_per_subband == 16
    with pytest.raises(ValueError):
        QuadratureSpec(points=8)
    with pytest.raises(ValueError):
        QuadratureSpec(rule="simpson")


def test_matrix_entries_follow_signed_cycle_index():
    m = SrrcPamModel(4, 0.7)
    sigma = 0.1
    S = assemble_cyclic_psd_matrix(m, sigma)
    for r in range(4):
        for c in range(4):
            expect = m.cyclic_value(r - c, np.array([sigma + r / 4]))[0]
            assert S.entries[r, c] == pytest.approx(expect, abs=1e-15)
    assert S.period == 4
    assert not S.entries.flags.writeable


def test_assembled_matrices_are_hermitian_psd():
    m = composite_model(SrrcPamModel(4, 0.5), 0.3)
    stack = assemble_matrices(m, FrequencyGrid(4, 64).sigma_nodes)
    np.testing.assert_allclose(stack, np.conj(np.swapaxes(stack, 1, 2)), atol=1e-14)
    assert np.linalg.eigvalsh(stack).min() > -1e-12
    d = validate_psd(stack[3])
    assert d.ok and d.hermitian_residual < 1e-14


def test_white_noise_matrix_is_scaled_identity():
    S = assemble_cyclic_psd_matrix(WhiteNoiseModel(0.4, 3), 0.05).entries
    np.testing.assert_allclose(S, 0.4 * np.eye(3))


def test_inconsistent_model_is_rejected():
    bad = FunctionModel(3, lambda k, f: np.full(np.shape(f), 1.0 + 0.5 * k), 1.0)
    with pytest.raises(ModelInconsistent):
        assemble_cyclic_psd_matrix(bad, 0.1)


def test_sigma_outside_subband():
    with pytest.raises(ValueError):
        assemble_matrices(SrrcPamModel(4), [0.25])
    with pytest.raises(ValueError):
        assemble_matrices(SrrcPamModel(4), [-0.01])


def test_spectral_correlation_ridges():
    m = SrrcPamModel(4, 0.0)
    assert spectral_correlation(m, 0.13, 0.1) == 0
    assert spectral_correlation(m, 0.25, 0.1) == pytest.approx(m.cyclic_value(1, np.array([0.1]))[0])
    # f - alpha wraps below zero: the signed index is negative
    got = spectral_correlation(m, 0.75, 0.1)
    assert got == pytest.approx(m.cyclic_value(-1, np.array([0.1]))[0])
    assert spectral_correlation(m, 0.0, 0.1) == pytest.approx(4 * np.cos(np.pi * 2 * 0.1) ** 2)


def test_parseval_trace_integral():
    for P in (2, 4, 8):
        x = composite_model(SrrcPamModel(P, 0.3), 0.5)
        g = FrequencyGrid(P, 256)
        S = assemble_matrices(x, g.sigma_nodes)
        power = float(integrate_values(np.real(np.trace(S, axis1=1, axis2=2)), g))
        assert power == pytest.approx(1.5, abs=1e-9)


def test_integrate_subband_matches_quad():
    g = FrequencyGrid(4, 1024)
    f = lambda s: np.exp(-3 * s) * np.cos(7 * s)
    ref = quad(f, 0, 0.25)[0]
    assert integrate_subband(f, g) == pytest.approx(ref, abs=1e-7)
    # scalar-only callables fall back to per-node evaluation
    assert integrate_subband(lambda s: float(f(s)), g) == pytest.approx(ref, abs=1e-7)


def test_non_finite_integrand():
    g = FrequencyGrid(2, 4)
    with pytest.raises(NonFiniteIntegrand):
        integrate_values(np.array([1.0, np.nan, 1.0, 1.0]), g)
    with pytest.raises(FloatingPointError):
        integrate_values(np.array([1.0, np.inf, 1.0, 1.0]), g)


def test_sum_model_powers_add():
    m = SrrcPamModel(4) + WhiteNoiseModel(0.25, 4)
    assert m.signal_power == pytest.approx(1.25)
    assert m.period == 4
