"""Sample paths of the delayed-PAM-in-noise model.

Realizations are circular: the symbol stream is convolved with the pulse taps
modulo ``n_samples`` through the FFT, so the path has no start-up transient.
The fractional delay is a phase ramp ``exp(-j 2 pi f eps)`` applied on the
``[0, 1)`` DFT grid, which is the convention the cyclic spectrum model uses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..models import Pulse, SrrcPamModel, pulse_time_taps


@dataclass
class Realization:
    n_samples: int
    seed: int
    trial: int
    period: int
    delta: float
    noise_power: float
    epsilon: float
    d: np.ndarray = field(repr=False)
    z: np.ndarray = field(repr=False)
    x: np.ndarray = field(repr=False)
    d_hat: np.ndarray | None = field(default=None, repr=False)

    @property
    def e(self) -> np.ndarray | None:
        return None if self.d_hat is None else self.d - self.d_hat


def _cscg(rng: np.random.Generator, n: int, variance: float) -> np.ndarray:
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def circular_pulse_spectrum(pulse: Pulse, n: int) -> np.ndarray:
    """DFT of the taps wrapped circularly onto ``n`` samples (``b(-k)`` at ``n-k``)."""
    if pulse.taps.size > n:
        raise ValueError("realization shorter than the pulse")
    h = np.zeros(n)
    np.add.at(h, pulse.indices % n, pulse.taps)
    return np.fft.fft(h)


def generate_realization(
    model: SrrcPamModel,
    noise_power: float,
    n_samples: int,
    seed: int,
    trial: int = 0,
    pulse: Pulse | None = None,
) -> Realization:
    """Draw ``d``, ``z`` and ``x = d + z`` deterministically from ``(seed, trial)``.

    Symbols are circular complex Gaussian with variance ``P``; one delay
    ``eps ~ U[0, delta)`` is drawn per realization.
    """
    P = model.period
    if n_samples % P:
        raise ValueError("n_samples must be a multiple of the period")
    if noise_power < 0:
        raise ValueError("noise power must be nonnegative")
    pulse = pulse or pulse_time_taps(P)
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))

    symbols = _cscg(rng, n_samples // P, float(P))
    eps = float(rng.uniform(0.0, model.delta)) if model.delta > 0 else 0.0
    z = _cscg(rng, n_samples, noise_power) if noise_power > 0 else np.zeros(n_samples, complex)

    train = np.zeros(n_samples, dtype=complex)
    train[::P] = symbols
    spectrum = np.fft.fft(train) * circular_pulse_spectrum(pulse, n_samples)
    if eps:
        f = np.arange(n_samples) / n_samples
        spectrum *= np.exp(-2j * np.pi * f * eps)
    d = np.fft.ifft(spectrum)
    return Realization(n_samples, seed, trial, P, model.delta, noise_power, eps, d, z, d + z)


def dump_realization(realization: Realization, path: str | Path, which: str = "x") -> Path:
    """Write one sequence as little-endian interleaved float64 (I, Q) pairs.

    A sidecar ``<path>.txt`` holds a single header line with the parameters.
    """
    path = Path(path)
    data = getattr(realization, which)
    if data is None:
        raise ValueError(f"realization has no {which!r} sequence")
    np.asarray(data, dtype="<c16").tofile(path)
    header = (
        f"P={realization.period} delta={realization.delta!r} noise_power={realization.noise_power!r} "
        f"seed={realization.seed} trial={realization.trial} n_samples={realization.n_samples} "
        f"epsilon={realization.epsilon!r} sequence={which}\n"
    )
    sidecar = path.with_name(path.name + ".txt")
    sidecar.write_text(header)
    return sidecar


def load_dump(path: str | Path) -> tuple[np.ndarray, dict[str, str]]:
    path = Path(path)
    data = np.fromfile(path, dtype="<c16")
    header = path.with_name(path.name + ".txt").read_text().split()
    meta = dict(item.split("=", 1) for item in header)
    return data, meta
