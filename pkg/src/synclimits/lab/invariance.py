"""Time-shift invariance of the KL spectrum."""

from __future__ import annotations

import numpy as np

from ..spectral_core import CyclicSpectrumModel, FrequencyGrid, assemble_matrices


def timeshift_spectrum_check(model: CyclicSpectrumModel, n0: int, grid: FrequencyGrid) -> float:
    """Largest eigenvalue change when the process is delayed by ``n0`` samples.

    A delay multiplies the cyclic PSD matrix by ``D = diag(exp(j 2 pi n0 q / P))``
    on both sides, a unitary similarity, so the result should be round-off.
    """
    n0 = int(n0)
    P = model.period
    S = assemble_matrices(model, grid.sigma_nodes)
    phase = np.exp(2j * np.pi * ((n0 * np.arange(P)) % P) / P)
    shifted = phase[:, None] * S * np.conj(phase)[None, :]
    a = np.linalg.eigvalsh(S)
    b = np.linalg.eigvalsh(shifted)
    return float(np.max(np.abs(a - b)))
