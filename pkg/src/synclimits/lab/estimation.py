"""Averaged cyclic periodogram.

Each Hann-windowed segment contributes ``X(f) conj(X(f - alpha))`` with
``alpha = k/P``; frequencies live on the ``n_fft``-point DFT grid, so the
shift is a circular bin offset. Segment start times are compensated so the
phase reference is the start of the record.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.ndimage import uniform_filter1d
from scipy.signal import get_window

from ..errors import InsufficientData

MIN_SEGMENTS = 8
_CHUNK = 256


@dataclass(frozen=True)
class CyclicSpectrumEstimate:
    """``values[j, m]`` estimates the cyclic spectrum at ``cycles[j]`` and ``freqs[m]``.

    With several trials, ``trial_values[t, j, m]`` keeps each trial's estimate.
    """

    period: int
    cycles: np.ndarray
    freqs: np.ndarray
    values: np.ndarray = field(repr=False)
    std_error: np.ndarray = field(repr=False)
    n_segments: int
    n_trials: int
    window: str = "hann"
    overlap: float = 0.5
    smoothing: int = 1
    trial_values: np.ndarray | None = field(default=None, repr=False)

    def ridge(self, k) -> np.ndarray:
        j = int(np.flatnonzero(np.isclose(self.cycles, k))[0])
        return self.values[j]


def _segments(x: np.ndarray, n_fft: int, hop: int) -> tuple[np.ndarray, np.ndarray]:
    view = sliding_window_view(x, n_fft)[::hop]
    starts = np.arange(view.shape[0]) * hop
    return view, starts


def _trial_products(x, n_fft, hop, win, norm, shifts, smoothing):
    """Per-trial mean and per-segment sum of squares for every cycle."""
    view, starts = _segments(x, n_fft, hop)
    nseg = view.shape[0]
    K = len(shifts)
    total = np.zeros((K, n_fft), dtype=complex)
    total_sq = np.zeros((K, n_fft))
    for lo in range(0, nseg, _CHUNK):
        X = np.fft.fft(view[lo : lo + _CHUNK] * win, axis=-1)
        n0 = starts[lo : lo + _CHUNK, None]
        for j, s in enumerate(shifts):
            prod = X * np.conj(np.roll(X, s, axis=-1))
            prod *= np.exp(-2j * np.pi * (s / n_fft) * n0)
            if smoothing > 1:
                prod = uniform_filter1d(prod.real, smoothing, axis=-1, mode="wrap") + 1j * uniform_filter1d(
                    prod.imag, smoothing, axis=-1, mode="wrap"
                )
            prod /= norm
            total[j] += prod.sum(axis=0)
            total_sq[j] += np.sum(np.abs(prod) ** 2, axis=0)
    return total / nseg, total_sq, nseg


def estimate_cyclic_spectrum(
    x,
    P: int,
    n_fft: int = 4096,
    overlap: float = 0.5,
    smoothing: int = 1,
    cycles=None,
) -> CyclicSpectrumEstimate:
    """Estimate the cyclic spectrum of ``x`` at cycle indices ``cycles`` (default ``0..P-1``).

    ``x`` may be 2-D (trials by samples); trials are then averaged and the
    standard error comes from the spread across trials. For a single record
    it comes from the spread across segments, which ignores the correlation
    of overlapping segments. A non-integer cycle index probes an off-ridge
    offset; it is rounded to the nearest bin. ``smoothing`` is the width in
    bins of a circular moving average applied along frequency.
    """
    x = np.atleast_2d(np.asarray(x, dtype=complex))
    if n_fft % P:
        raise ValueError("n_fft must be a multiple of the period")
    if not 0.0 <= overlap < 1.0:
        raise ValueError("overlap must lie in [0, 1)")
    if smoothing < 1:
        raise ValueError("smoothing must be at least 1 bin")
    hop = max(1, int(round(n_fft * (1.0 - overlap))))
    if x.shape[1] < n_fft or (x.shape[1] - n_fft) // hop + 1 < MIN_SEGMENTS:
        raise InsufficientData(f"need at least {MIN_SEGMENTS} segments of {n_fft} samples per trial")
    cycles = np.arange(P, dtype=float) if cycles is None else np.atleast_1d(np.asarray(cycles, dtype=float))
    shifts = [int(round(k * n_fft / P)) for k in cycles]

    win = get_window("hann", n_fft)
    norm = float(np.sum(win**2))
    means, sumsq, counts = [], [], []
    for row in x:
        m, sq, n = _trial_products(row, n_fft, hop, win, norm, shifts, smoothing)
        means.append(m)
        sumsq.append(sq)
        counts.append(n)
    means = np.array(means)
    values = means.mean(axis=0)
    T = means.shape[0]
    if T >= 2:
        diff = means - values
        se = np.sqrt(np.sum(np.abs(diff) ** 2, axis=0) / (T - 1) / T)
    else:
        n = counts[0]
        var = np.maximum(sumsq[0] / n - np.abs(values) ** 2, 0.0) * n / (n - 1)
        se = np.sqrt(var / n)
    freqs = np.arange(n_fft) / n_fft
    return CyclicSpectrumEstimate(
        P, cycles, freqs, values, se, counts[0], T, "hann", overlap, smoothing, means if T >= 2 else None
    )
