"""Cyclic Wiener smoothing in two independent forms.

``apply_fresh`` runs a FREquency-SHift filter bank: ``P`` frequency-shifted
replicas of the input, each through its own LTI filter, summed. The branch
responses come from per-frequency linear solves against the observation
cyclic PSD matrix. ``apply_kl_wiener`` instead rotates each stacked
``P``-vector of DFT bins into the KL basis, applies scalar Wiener gains and
rotates back. Both produce the same output up to round-off.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import oaconvolve

from ..errors import LengthMismatch
from ..kl_transform import eigh_descending
from ..mmse import AdditiveScenario
from ..spectral_core import assemble_matrices


@dataclass(frozen=True)
class FreshFilterBank:
    """Branch ``q`` filters the input shifted down by ``q/P`` cycles/sample.

    ``responses[q, m]`` is ``W_q`` at ``f = m / n_dft``; the output spectrum is
    ``sum_q conj(W_q(f)) X(f + q/P)``.
    """

    period: int
    responses: np.ndarray = field(repr=False)

    @property
    def n_dft(self) -> int:
        return self.responses.shape[1]


def design_cwf(scenario: AdditiveScenario, n_dft: int) -> FreshFilterBank:
    P = scenario.period
    if n_dft % P:
        raise ValueError("n_dft must be a multiple of the period")
    ns = n_dft // P
    sig = np.arange(ns) / n_dft
    S = assemble_matrices(scenario.signal, sig)
    obs = S + scenario.noise_power * np.eye(P)
    # columns of S_X^-1 S_D; the smoother matrix is its conjugate transpose
    G = np.linalg.solve(obs, S)
    M = np.conj(np.swapaxes(G, -1, -2))
    resp = np.empty((P, n_dft), dtype=complex)
    rows = np.arange(P)
    for q in range(P):
        cols = (rows + q) % P
        resp[q] = np.conj(M[:, rows, cols]).T.ravel()
    resp.setflags(write=False)
    return FreshFilterBank(P, resp)


def _shift(x: np.ndarray, q: int, P: int) -> np.ndarray:
    """``x(n) exp(-j 2 pi q n / P)``: moves ``X(f + q/P)`` to ``f``."""
    phase = np.exp(-2j * np.pi * q * np.arange(P) / P)
    return x * np.resize(phase, x.size)


def apply_fresh(bank: FreshFilterBank, x) -> np.ndarray:
    """Filter ``x`` with the bank.

    When ``len(x) == n_dft`` the filtering is circular over the whole block.
    Longer inputs (a multiple of ``n_dft``) are streamed through FIR filters
    of length ``n_dft`` sampled from the responses, using overlap-add.
    """
    x = np.asarray(x, dtype=complex)
    n, nd, P = x.size, bank.n_dft, bank.period
    if n == 0 or n % nd:
        raise LengthMismatch(f"input length {n} is not a multiple of n_dft={nd}")
    if n == nd:
        acc = np.zeros(n, dtype=complex)
        for q in range(P):
            acc += np.conj(bank.responses[q]) * np.fft.fft(_shift(x, q, P))
        return np.fft.ifft(acc)
    y = np.zeros(n, dtype=complex)
    half = nd // 2
    for q in range(P):
        h = np.fft.fftshift(np.fft.ifft(np.conj(bank.responses[q])))
        y += oaconvolve(_shift(x, q, P), h, mode="full")[half : half + n]
    return y


def apply_kl_wiener(scenario: AdditiveScenario, x) -> np.ndarray:
    """Whole-block smoothing in the KL domain (circular)."""
    x = np.asarray(x, dtype=complex)
    P, n = scenario.period, x.size
    if n == 0 or n % P:
        raise LengthMismatch("input length must be a positive multiple of the period")
    ns = n // P
    X = np.fft.fft(x).reshape(P, ns).T
    S = assemble_matrices(scenario.signal, np.arange(ns) / n)
    Pz = scenario.noise_power
    lam_x, B = eigh_descending(S + Pz * np.eye(P))
    gains = np.maximum(lam_x - Pz, 0.0) / lam_x
    coeffs = np.einsum("iqp,iq->ip", np.conj(B), X)
    Y = np.einsum("iqp,ip->iq", B, gains * coeffs)
    return np.fft.ifft(Y.T.ravel())


def empirical_mse(reference, estimate, edge_discard: int = 0) -> float:
    reference = np.asarray(reference)
    estimate = np.asarray(estimate)
    if reference.shape != estimate.shape:
        raise LengthMismatch("reference and estimate differ in length")
    if edge_discard < 0 or 2 * edge_discard >= reference.size:
        raise ValueError("edge_discard leaves no samples")
    sl = slice(edge_discard, reference.size - edge_discard)
    return float(np.mean(np.abs(reference[sl] - estimate[sl]) ** 2))
