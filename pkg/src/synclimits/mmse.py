"""Asymptotic MMSE bounds for a cyclostationary signal in white noise.

Everything is computed from the eigenvalues of the signal cyclic PSD matrix
``S_D(sigma)`` (synchronous bounds) or from its diagonal, i.e. the PSD
(bounds for a receiver that treats the signal as WSS). Eigenvalue forms are
used instead of matrix inverses because ``S_D`` is often rank deficient.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularMatrix, SingularSpectrumWarning
from .kl_transform import cl_samples, eigh_descending, kl_eigenvalues
from .models import composite_model
from .spectral_core import (
    CyclicPsdMatrix,
    CyclicSpectrumModel,
    FrequencyGrid,
    assemble_cyclic_psd_matrix,
    assemble_matrices,
    integrate_values,
)

LOG_FLOOR = 1e-300
BAND_RTOL = 1e-12
GSV_NODES = 512


@dataclass(frozen=True)
class AdditiveScenario:
    """Observation ``x = d + z``: unit-power CS signal plus white noise."""

    signal: CyclicSpectrumModel
    noise_power: float

    def __post_init__(self):
        if not self.noise_power > 0:
            raise ValueError("noise power must be positive")
        if abs(self.signal.signal_power - 1.0) > 1e-6:
            raise ValueError("the signal must have unit power so that SNR = 1/Pz")

    @classmethod
    def from_snr(cls, signal: CyclicSpectrumModel, snr: float) -> "AdditiveScenario":
        return cls(signal, 1.0 / snr)

    @property
    def snr(self) -> float:
        return 1.0 / self.noise_power

    @property
    def period(self) -> int:
        return self.signal.period

    @property
    def observation(self) -> CyclicSpectrumModel:
        return composite_model(self.signal, self.noise_power)


@dataclass(frozen=True)
class CoherenceMatrix:
    sigma: float
    entries: np.ndarray = field(repr=False)

    @property
    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.entries, compute_uv=False)


@dataclass(frozen=True)
class SyncGains:
    zeta_nc: float
    zeta_c: float
    zeta_p: float


@dataclass(frozen=True)
class MmseReport:
    snr: float
    mmse_nc: float
    mmse_c: float
    mmse_p: float
    mmse_nc_wss: float
    mmse_c_wss: float
    mmse_p_wss: float

    @property
    def gains(self) -> SyncGains:
        return SyncGains(
            self.mmse_nc / self.mmse_nc_wss,
            self.mmse_c / self.mmse_c_wss,
            self.mmse_p / self.mmse_p_wss,
        )


def _model_of(source) -> CyclicSpectrumModel:
    return source.observation if isinstance(source, AdditiveScenario) else source


# -- smoothing ---------------------------------------------------------------


def kl_wiener_gains(scenario: AdditiveScenario, sigma: float) -> np.ndarray:
    """Per-bin Wiener gains ``lambda_p / (lambda_p + Pz)``, descending rank order."""
    lam, _ = eigh_descending(assemble_cyclic_psd_matrix(scenario.signal, sigma).entries)
    return lam / (lam + scenario.noise_power)


def _noncausal_from_eigs(eig: np.ndarray, noise_power: float, grid: FrequencyGrid) -> float:
    per_node = (eig * noise_power / (eig + noise_power)).sum(axis=1)
    return float(integrate_values(per_node, grid))


def mmse_noncausal(scenario: AdditiveScenario, grid: FrequencyGrid) -> float:
    eig = kl_eigenvalues(scenario.signal, grid)
    return _noncausal_from_eigs(eig, scenario.noise_power, grid)


def _hermitian_power(stack: np.ndarray, power: float) -> np.ndarray:
    w, V = np.linalg.eigh(stack)
    w = np.maximum(w, 0.0)
    with np.errstate(divide="ignore"):
        wp = np.where(w > 0, w**power, 0.0) if power >= 0 else w**power
    return (V * wp[..., None, :]) @ np.conj(np.swapaxes(V, -1, -2))


def _coherence_stack(signal_mats: np.ndarray, noise_power: float) -> np.ndarray:
    P = signal_mats.shape[-1]
    obs = signal_mats + noise_power * np.eye(P)
    if noise_power <= 0:
        w = np.linalg.eigvalsh(obs)
        if np.any(w[..., 0] <= 0):
            raise SingularMatrix("observation PSD matrix is singular")
    return _hermitian_power(signal_mats, 0.5) @ _hermitian_power(obs, -0.5)


def coherence_matrix(scenario: AdditiveScenario, sigma: float) -> CoherenceMatrix:
    """``C = S_D^(1/2) S_X^(-1/2)`` for the additive model (``S_DX = S_D``)."""
    S = assemble_cyclic_psd_matrix(scenario.signal, sigma).entries
    return CoherenceMatrix(float(sigma), _coherence_stack(S[None], scenario.noise_power)[0])


def mmse_noncausal_via_coherence(scenario: AdditiveScenario, grid: FrequencyGrid) -> float:
    """Smoothing MMSE as ``int tr[S_D (I - C C^H)]``; independent of the eigen route."""
    S = assemble_matrices(scenario.signal, grid.sigma_nodes)
    C = _coherence_stack(S, scenario.noise_power)
    P = S.shape[-1]
    inner = np.eye(P) - C @ np.conj(np.swapaxes(C, -1, -2))
    per_node = np.real(np.trace(S @ inner, axis1=-2, axis2=-1))
    return float(integrate_values(per_node, grid))


def error_cyclic_psd(scenario: AdditiveScenario, sigma: float) -> CyclicPsdMatrix:
    """Cyclic PSD matrix of the smoothing error, ``Pz S_D (S_D + Pz I)^-1``."""
    S = assemble_cyclic_psd_matrix(scenario.signal, sigma).entries
    Pz = scenario.noise_power
    obs = S + Pz * np.eye(S.shape[0])
    # S_D and S_X commute, so S_D S_X^-1 = (S_X^-1 S_D)^H
    E = Pz * np.linalg.solve(obs, S).conj().T
    E = 0.5 * (E + E.conj().T)
    E.setflags(write=False)
    return CyclicPsdMatrix(float(sigma), E)


def mmse_noncausal_wss(scenario: AdditiveScenario, grid: FrequencyGrid) -> float:
    psd = cl_samples(scenario.signal, grid)
    Pz = scenario.noise_power
    return float(integrate_values((psd * Pz / (psd + Pz)).sum(axis=1), grid))


# -- causal filtering ----------------------------------------------------------


def _causal_from_eigs(eig: np.ndarray, snr: float, grid: FrequencyGrid) -> float:
    logs = np.log1p(snr * eig).sum(axis=1)
    return float(integrate_values(logs, grid)) / snr


def mmse_causal(scenario: AdditiveScenario, grid: FrequencyGrid) -> float:
    """Causal filtering MMSE, ``(1/SNR) int ln|SNR S_D + I| dsigma``."""
    return _causal_from_eigs(kl_eigenvalues(scenario.signal, grid), scenario.snr, grid)


def mmse_causal_gsv(scenario: AdditiveScenario, grid: FrequencyGrid, nodes: int = GSV_NODES) -> float:
    """Causal MMSE as the SNR-average of the smoothing MMSE (midpoint rule in SNR)."""
    eig = kl_eigenvalues(scenario.signal, grid)
    snr = scenario.snr
    gammas = (np.arange(nodes) + 0.5) * snr / nodes
    # smoothing MMSE at SNR gamma is sum_p lambda / (gamma lambda + 1)
    vals = [float(integrate_values((eig / (g * eig + 1.0)).sum(axis=1), grid)) for g in gammas]
    return float(np.mean(vals))


def mmse_causal_wss(scenario: AdditiveScenario, grid: FrequencyGrid) -> float:
    psd = cl_samples(scenario.signal, grid)
    snr = scenario.snr
    return float(integrate_values(np.log1p(snr * psd).sum(axis=1), grid)) / snr


# -- prediction ----------------------------------------------------------------


def _log_det_integral(values: np.ndarray, grid: FrequencyGrid) -> float | None:
    if np.any(values < LOG_FLOOR):
        return None
    return float(integrate_values(np.log(values).sum(axis=1), grid))


def _exp_or_flag(log_int: float | None) -> float:
    if log_int is None:
        warnings.warn(
            "spectrum vanishes on a set of positive measure: process is perfectly predictable",
            SingularSpectrumWarning,
            stacklevel=3,
        )
        return 0.0
    return math.exp(log_int)


def mmse_prediction(source: AdditiveScenario | CyclicSpectrumModel, grid: FrequencyGrid) -> float:
    """One-step prediction bound ``exp int ln|S_X(sigma)| dsigma``.

    Returns 0 and emits :class:`SingularSpectrumWarning` when an eigenvalue
    drops below ``1e-300`` at some node.
    """
    return _exp_or_flag(_log_det_integral(kl_eigenvalues(_model_of(source), grid), grid))


def mmse_prediction_wss(source: AdditiveScenario | CyclicSpectrumModel, grid: FrequencyGrid) -> float:
    """Kolmogorov-Szego bound from the PSD alone."""
    return _exp_or_flag(_log_det_integral(cl_samples(_model_of(source), grid), grid))


def prediction_gain_via_coherence(source: AdditiveScenario | CyclicSpectrumModel, grid: FrequencyGrid) -> float:
    """``zeta_p = exp int ln|Cbar_X| dsigma`` with ``Cbar = Sbar^-1 S_X Sbar^-H``.

    ``Sbar = (I o S_X)^(1/2)`` is the diagonal of the matrix square-rooted.
    """
    S = assemble_matrices(_model_of(source), grid.sigma_nodes)
    dg = np.real(np.diagonal(S, axis1=-2, axis2=-1))
    if np.any(dg <= 0):
        raise SingularMatrix("cyclic PSD matrix has a zero diagonal entry")
    inv_root = 1.0 / np.sqrt(dg)
    Cbar = inv_root[:, :, None] * S * inv_root[:, None, :]
    sign, logdet = np.linalg.slogdet(Cbar)
    if np.any(np.real(sign) <= 0):
        return 0.0
    return math.exp(float(integrate_values(logdet, grid)))


# -- gains, reports, asymptotes -----------------------------------------------------


def mmse_report(scenario: AdditiveScenario, grid: FrequencyGrid) -> MmseReport:
    eig = kl_eigenvalues(scenario.signal, grid)
    psd = cl_samples(scenario.signal, grid)
    Pz, snr = scenario.noise_power, scenario.snr
    return MmseReport(
        snr=snr,
        mmse_nc=_noncausal_from_eigs(eig, Pz, grid),
        mmse_c=_causal_from_eigs(eig, snr, grid),
        mmse_p=_exp_or_flag(_log_det_integral(kl_eigenvalues(scenario.observation, grid), grid)),
        mmse_nc_wss=_noncausal_from_eigs(psd, Pz, grid),
        mmse_c_wss=_causal_from_eigs(psd, snr, grid),
        mmse_p_wss=_exp_or_flag(_log_det_integral(psd + Pz, grid)),
    )


def sync_gains(scenario: AdditiveScenario, grid: FrequencyGrid) -> SyncGains:
    return mmse_report(scenario, grid).gains


def occupied_band(signal: CyclicSpectrumModel, grid: FrequencyGrid) -> float:
    """Measure of ``{lambda : KL-PSD(lambda) > 1e-12 * max}``."""
    eig = kl_eigenvalues(signal, grid)
    top = eig.max()
    if top <= 0:
        return 0.0
    return float(np.count_nonzero(eig > BAND_RTOL * top) * grid.step)


def high_snr_asymptote(mode: str, band: float, snr, log_spectrum_integral: float = 0.0):
    """Leading high-SNR behaviour of each MMSE for a KL spectrum on ``[0, B)``.

    ``noncausal``: ``B/SNR``; ``causal``: ``B ln(SNR)/SNR``; ``prediction``:
    ``SNR^-(1-B)``. ``log_spectrum_integral`` (``int_0^B ln S_D``) adds the
    next-order term: ``+L/SNR`` for causal, factor ``exp(L)`` for prediction.
    """
    if not 0.0 < band <= 1.0:
        raise ValueError("band must lie in (0, 1]")
    snr = np.asarray(snr, dtype=float)
    if mode == "noncausal":
        out = band / snr
    elif mode == "causal":
        out = (band * np.log(snr) + log_spectrum_integral) / snr
    elif mode == "prediction":
        out = math.exp(log_spectrum_integral) * snr ** (-(1.0 - band))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return float(out) if out.ndim == 0 else out
