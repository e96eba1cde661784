"""PAM with a square-root raised-cosine pulse and a random fractional delay.

The transmitted signal is ``d(n) = sum_k a(k) b(n - kP)`` with uncorrelated
symbols of power ``P`` and a 100% excess-bandwidth SRRC pulse whose DTFT is
``B(f) = sqrt(P) cos(pi P f / 2)`` on ``[-1/P, 1/P)``. The observation is
``x(n) = d(n - eps) + z(n)`` with ``eps ~ U[0, Delta)`` and white noise ``z``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from .errors import TruncationError
from .spectral_core import CyclicSpectrumModel, SumModel, WhiteNoiseModel

TAIL_ENERGY_LIMIT = 1e-6


def pulse_frequency_response(P: int, f):
    """1-periodic SRRC response: nonzero on ``[0, 1/P) U (1 - 1/P, 1)``."""
    f = np.asarray(f, dtype=float)
    fw = np.mod(f, 1.0)
    fw = np.where(fw >= 0.5, fw - 1.0, fw)
    inside = (fw >= -1.0 / P) & (fw < 1.0 / P)
    return np.where(inside, np.sqrt(P) * np.cos(0.5 * np.pi * P * fw), 0.0)


def smear_factor(k, delta: float, period: int):
    """``E[exp(-j 2 pi k eps / P)]`` for ``eps ~ U[0, delta)``.

    Evaluated as ``exp(-j theta/2) sinc(theta / 2pi)`` with
    ``theta = 2 pi delta k / P``, which is exact and has no 0/0 at ``k=0`` or
    ``delta=0``.
    """
    x = np.asarray(k, dtype=float) * delta / period
    return np.exp(-1j * np.pi * x) * np.sinc(x)


def pam_cyclic_value(P: int, delta: float, k: int, f):
    f = np.asarray(f, dtype=float)
    Bf = pulse_frequency_response(P, f)
    Bs = pulse_frequency_response(P, f - k / P)
    return Bf * np.conj(Bs) * smear_factor(k, delta, P)


class SrrcPamModel(CyclicSpectrumModel):
    """Unit-power SRRC PAM signal with uniform random delay on ``[0, delta)``."""

    def __init__(self, period: int, delta: float = 0.0):
        period = int(period)
        if period < 2:
            raise ValueError("SRRC PAM needs period >= 2 (pulse support spans 2/P)")
        dmax = period / (period - 1)
        if not 0.0 <= delta <= dmax + 1e-12:
            raise ValueError(f"delta must lie in [0, {dmax:.6g}] for period {period}")
        self.period = period
        self.delta = float(delta)
        self.signal_power = 1.0

    @property
    def max_delta(self) -> float:
        return self.period / (self.period - 1)

    def cyclic_value(self, k, f):
        return pam_cyclic_value(self.period, self.delta, k, f)

    def __repr__(self):
        return f"SrrcPamModel(period={self.period}, delta={self.delta:.6g})"


def composite_model(signal: CyclicSpectrumModel, noise_power: float) -> CyclicSpectrumModel:
    """Signal plus independent white noise of power ``noise_power``."""
    if noise_power < 0:
        raise ValueError("noise power must be nonnegative")
    return SumModel(signal, WhiteNoiseModel(noise_power, signal.period))


@dataclass(frozen=True)
class Pulse:
    taps: np.ndarray
    half_length: int

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.half_length, self.half_length + 1)

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.taps) ** 2))

    def tap(self, n):
        """``b(n)``, zero outside the retained support."""
        n = np.asarray(n)
        idx = n + self.half_length
        ok = (idx >= 0) & (idx < self.taps.size)
        return np.where(ok, self.taps[np.clip(idx, 0, self.taps.size - 1)], 0.0)


@lru_cache(maxsize=32)
def pulse_time_taps(P: int, half_length: int | None = None, nodes: int = 4096) -> Pulse:
    """Inverse DTFT of the SRRC response, truncated to ``|n| <= half_length``.

    Gauss-Legendre quadrature over the support ``[-1/P, 1/P]``; the integrand
    is smooth there, so 4096 nodes are exact to rounding for the lags used.
    """
    if half_length is None:
        half_length = 32 * P
    if half_length < 8 * P:
        raise ValueError("half_length must be at least 8 * P")
    if nodes < 4096:
        raise ValueError("use at least 4096 quadrature nodes")
    x, w = roots_legendre(nodes)
    f = x / P
    weights = w / P * np.sqrt(P) * np.cos(0.5 * np.pi * P * f)
    n = np.arange(-half_length, half_length + 1)
    # B is real and even, so b(n) is real and even
    taps = np.cos(2 * np.pi * np.outer(n, f)) @ weights
    tail = 1.0 - float(np.sum(taps**2))
    if tail > TAIL_ENERGY_LIMIT:
        raise TruncationError(
            f"tail energy {tail:.3g} beyond |n| > {half_length} exceeds {TAIL_ENERGY_LIMIT:g}"
        )
    taps.setflags(write=False)
    return Pulse(taps, half_length)
