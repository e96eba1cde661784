"""Finite-order one-step linear prediction of the synchronous PAM observation.

The observation ``x = d + z`` (zero delay) has the periodically varying
autocorrelation ``r(n, m) = E[x(n+m) x*(n)]``. Predicting ``x(n)`` from the
``N`` previous samples leaves an error power equal to the ratio of two Gram
determinants; both are read off Cholesky factors, so every order up to the
maximum comes from two factorizations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ..errors import NotPositiveDefinite, UnsupportedDelay
from ..models import Pulse, SrrcPamModel, pulse_time_taps

MAX_ORDER = 512


def _check(model: SrrcPamModel, noise_power: float) -> None:
    if model.delta != 0.0:
        raise UnsupportedDelay("the time-domain kernel is only available for zero delay")
    if noise_power < 0:
        raise ValueError("noise power must be nonnegative")


def autocorrelation_kernel(model: SrrcPamModel, noise_power: float, n, m, pulse: Pulse | None = None):
    """``r(n, m) = P sum_k b(n+m-kP) b*(n-kP) + Pz delta_m``, broadcast over ``n`` and ``m``."""
    _check(model, noise_power)
    P = model.period
    pulse = pulse or pulse_time_taps(P)
    L = pulse.half_length
    n, m = np.broadcast_arrays(np.asarray(n, dtype=np.int64), np.asarray(m, dtype=np.int64))
    base = np.mod(n, P)  # r is P-periodic in n
    # symbol indices k with |base - kP| <= L
    ks = np.arange(-(L // P) - 1, (L + P - 1) // P + 2)
    arg0 = base[..., None] - ks * P
    acc = np.sum(pulse.tap(arg0 + m[..., None]) * np.conj(pulse.tap(arg0)), axis=-1)
    out = P * acc + noise_power * (m == 0)
    return out[()] if out.ndim == 0 else out


def _gram(model, noise_power, times, pulse) -> np.ndarray:
    ti, tj = np.meshgrid(times, times, indexing="ij")
    # G[i, j] = E[x(t_i) x*(t_j)] = r(t_j, t_i - t_j)
    return autocorrelation_kernel(model, noise_power, tj, ti - tj, pulse)


def _log_leading_dets(G: np.ndarray) -> np.ndarray:
    """``log det G[:j, :j]`` for ``j = 1..n`` from one Cholesky factor."""
    try:
        L = scipy.linalg.cholesky(G, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite("Gram matrix is not positive definite") from exc
    d = np.real(np.diag(L))
    if np.any(d <= 0) or not np.all(np.isfinite(d)):
        raise NotPositiveDefinite("Gram matrix is numerically singular")
    return np.cumsum(2.0 * np.log(d))


def prediction_mmse_by_order(
    model: SrrcPamModel, noise_power: float, max_order: int, phase: int, pulse: Pulse | None = None
) -> np.ndarray:
    """Error powers for orders ``0..max_order`` when predicting ``x(phase)``."""
    _check(model, noise_power)
    if not 0 <= max_order <= MAX_ORDER:
        raise ValueError(f"order must lie in [0, {MAX_ORDER}]")
    pulse = pulse or pulse_time_taps(model.period)
    # x(n), x(n-1), ..., x(n-N): leading blocks hold the target plus its N most recent past samples
    times = phase - np.arange(max_order + 1)
    G = _gram(model, noise_power, times, pulse)
    with_target = _log_leading_dets(G)
    out = np.empty(max_order + 1)
    out[0] = np.exp(with_target[0])
    if max_order:
        past = _log_leading_dets(G[1:, 1:])
        out[1:] = np.exp(with_target[1:] - past)
    return out


def finite_prediction_mmse(
    model: SrrcPamModel, noise_power: float, order: int, phase: int, pulse: Pulse | None = None
) -> float:
    return float(prediction_mmse_by_order(model, noise_power, order, phase, pulse)[-1])


@dataclass(frozen=True)
class FinitePredictor:
    """``x_hat(n) = sum_j coefficients[j] x(n-1-j)`` for ``n = phase (mod P)``."""

    order: int
    phase: int
    coefficients: np.ndarray = field(repr=False)
    mmse: float

    def predict(self, past) -> complex:
        """``past[j]`` is ``x(n-1-j)``."""
        past = np.asarray(past)
        return complex(self.coefficients @ past[: self.order])


def design_predictor(
    model: SrrcPamModel, noise_power: float, order: int, phase: int, pulse: Pulse | None = None
) -> FinitePredictor:
    _check(model, noise_power)
    if not 1 <= order <= MAX_ORDER:
        raise ValueError(f"order must lie in [1, {MAX_ORDER}]")
    pulse = pulse or pulse_time_taps(model.period)
    times = phase - np.arange(order + 1)
    G = _gram(model, noise_power, times, pulse)
    R = G[1:, 1:]
    # orthogonality: E[(x(n) - c.past) past_i*] = 0
    try:
        c = scipy.linalg.solve(R.T, G[0, 1:], assume_a="her")
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite("past-sample Gram matrix is singular") from exc
    mmse = float(np.real(G[0, 0] - c @ G[1:, 0]))
    return FinitePredictor(order, phase % model.period, c, mmse)
