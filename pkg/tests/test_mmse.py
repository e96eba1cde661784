import math

import numpy as np
import pytest
from scipy.integrate import quad

from synclimits.errors import SingularSpectrumWarning
from synclimits.mmse import (
    AdditiveScenario,
    coherence_matrix,
    error_cyclic_psd,
    high_snr_asymptote,
    kl_wiener_gains,
    mmse_causal,
    mmse_causal_gsv,
    mmse_causal_wss,
    mmse_noncausal,
    mmse_noncausal_via_coherence,
    mmse_noncausal_wss,
    mmse_prediction,
    mmse_prediction_wss,
    mmse_report,
    occupied_band,
    prediction_gain_via_coherence,
    sync_gains,
)
from synclimits.models import SrrcPamModel, pam_cyclic_value
from synclimits.spectral_core import FrequencyGrid, integrate_subband

GRID = FrequencyGrid(4, 1024)


def scen(P=4, delta=0.0, snr=1.0):
    return AdditiveScenario.from_snr(SrrcPamModel(P, delta), snr)


def _psd(P):
    return lambda f: float(np.real(pam_cyclic_value(P, 0.0, 0, f)))


@pytest.mark.parametrize("snr", [0.25, 0.6, 1.0, 2.0, 10.0])
def test_closed_forms_at_zero_delay(snr):
    s = scen(snr=snr)
    assert mmse_noncausal(s, GRID) == pytest.approx(1 / (4 * snr + 1), abs=1e-12)
    assert mmse_causal(s, GRID) == pytest.approx(math.log(4 * snr + 1) / (4 * snr), abs=1e-12)
    pz = 1 / snr
    assert mmse_prediction(s, GRID) == pytest.approx(((4 + pz) * pz**3) ** 0.25, rel=1e-12)


@pytest.mark.parametrize("snr", [0.5, 1.0, 3.0])
def test_wss_baselines_match_adaptive_quadrature(snr):
    s = scen(snr=snr)
    S = _psd(4)
    pz = 1 / snr
    pts = [-0.25, 0.25]
    nc = quad(lambda f: S(f) * pz / (S(f) + pz), -0.5, 0.5, points=pts)[0]
    c = quad(lambda f: math.log1p(snr * S(f)), -0.5, 0.5, points=pts)[0] / snr
    p = math.exp(quad(lambda f: math.log(S(f) + pz), -0.5, 0.5, points=pts)[0])
    assert mmse_noncausal_wss(s, GRID) == pytest.approx(nc, abs=1e-7)
    assert mmse_causal_wss(s, GRID) == pytest.approx(c, abs=1e-7)
    assert mmse_prediction_wss(s, GRID) == pytest.approx(p, rel=1e-7)


def test_wss_noncausal_closed_form():
    assert mmse_noncausal_wss(scen(), GRID) == pytest.approx(0.5 - 1 / (2 * math.sqrt(5)), abs=1e-7)


def test_kolmogorov_szego_closed_form_period_two():
    pz = 1e-3
    a = 1 + pz
    expect = (a + math.sqrt(a * a - 1)) / 2
    got = mmse_prediction_wss(AdditiveScenario(SrrcPamModel(2), pz), FrequencyGrid(2, 1024))
    assert got == pytest.approx(expect, rel=1e-6)


@pytest.mark.parametrize("snr", [0.25, 0.6, 1.0, 2.0])
def test_gsv_average_matches_log_det(snr):
    s = scen(delta=0.5, snr=snr)
    assert mmse_causal_gsv(s, GRID) == pytest.approx(mmse_causal(s, GRID), abs=1e-4)


@pytest.mark.parametrize("delta", [0.0, 0.7, 4 / 3])
def test_coherence_route_matches_eigen_route(delta):
    s = scen(delta=delta, snr=1.5)
    assert mmse_noncausal_via_coherence(s, GRID) == pytest.approx(mmse_noncausal(s, GRID), abs=1e-10)


def test_coherence_singular_values_bounded():
    C = coherence_matrix(scen(delta=0.3), 0.1)
    sv = C.singular_values
    assert np.all(sv <= 1 + 1e-12) and np.all(sv >= 0)


@pytest.mark.parametrize("delta", [0.0, 0.9])
def test_error_spectrum_trace_identity(delta):
    s = scen(delta=delta, snr=2.0)
    tr = integrate_subband(lambda sg: np.trace(error_cyclic_psd(s, sg).entries).real, GRID)
    assert tr == pytest.approx(mmse_noncausal(s, GRID), abs=1e-9)


def test_wiener_gains():
    g = kl_wiener_gains(scen(snr=1.0), 0.1)
    np.testing.assert_allclose(g, [0.8, 0, 0, 0], atol=1e-12)


def test_prediction_identity():
    for snr in np.geomspace(0.1, 100, 7):
        s = scen(delta=0.4, snr=snr)
        lhs = mmse_prediction(s, GRID)
        rhs = math.exp(mmse_causal(s, GRID) * snr) / snr
        assert abs(lhs - rhs) / lhs < 1e-10


@pytest.mark.parametrize("P,snr", [(4, 1.0), (2, 1000.0), (4, 1000.0)])
def test_prediction_gain_dual_route(P, snr):
    s = scen(P=P, snr=snr)
    g = FrequencyGrid(P, 1024)
    r = mmse_report(s, g)
    assert prediction_gain_via_coherence(s, g) == pytest.approx(r.mmse_p / r.mmse_p_wss, rel=1e-9)


def test_gains_and_wss_limit():
    for delta in (0.0, 0.5, 1.0):
        gains = sync_gains(scen(delta=delta, snr=10.0), GRID)
        assert gains.zeta_nc <= 1 + 1e-9 and gains.zeta_c <= 1 + 1e-9 and gains.zeta_p <= 1 + 1e-9
    g = sync_gains(scen(delta=4 / 3, snr=10.0), GRID)
    assert g.zeta_nc == pytest.approx(1, abs=1e-9)
    assert g.zeta_c == pytest.approx(1, abs=1e-9)
    assert g.zeta_p == pytest.approx(1, abs=1e-6)


def test_singular_prediction_warns():
    with pytest.warns(SingularSpectrumWarning):
        assert mmse_prediction(SrrcPamModel(4), GRID) == 0.0


def test_scenario_validation():
    with pytest.raises(ValueError):
        AdditiveScenario(SrrcPamModel(4), 0.0)
    assert scen(snr=4.0).noise_power == pytest.approx(0.25)
    assert scen().period == 4


def test_occupied_band_and_asymptotes():
    assert occupied_band(SrrcPamModel(4), GRID) == pytest.approx(0.25)
    assert occupied_band(SrrcPamModel(4, 1.0), GRID) > 0.25
    snr = 1e5
    assert high_snr_asymptote("noncausal", 0.25, snr) * snr == pytest.approx(0.25)
    assert high_snr_asymptote("causal", 0.25, snr) * snr == pytest.approx(0.25 * math.log(snr))
    # next-order term: int_0^B ln S_D = ln(4)/4 recovers the exact value closely
    refined = high_snr_asymptote("causal", 0.25, snr, 0.25 * math.log(4)) * snr
    assert refined == pytest.approx(mmse_causal(scen(snr=snr), GRID) * snr, rel=1e-4)
    with pytest.raises(ValueError):
        high_snr_asymptote("bogus", 0.25, snr)
