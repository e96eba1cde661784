"""Karhunen-Loeve (KL) spectrum of cyclostationary processes.

Per sub-band frequency ``sigma`` the KL spectrum is the eigenvalue set of the
cyclic PSD matrix and the KL basis is its unitary eigenvector matrix.
Rank ``p`` (descending) is mapped onto the full-band interval
``[p/P, (p+1)/P)`` so that ``lambda = sigma + p/P``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EigensolveFailure, ModelInconsistent
from .spectral_core import (
    PSD_RTOL,
    CyclicPsdMatrix,
    CyclicSpectrumModel,
    FrequencyGrid,
    assemble_matrices,
    validate_psd,
)

_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class KlDecomposition:
    sigma: float
    eigenvalues: np.ndarray
    basis: np.ndarray = field(repr=False)

    def reconstruct(self) -> np.ndarray:
        return (self.basis * self.eigenvalues) @ self.basis.conj().T


@dataclass(frozen=True)
class SpectrumDensity:
    """Nonnegative density sampled on ``P*M`` uniform midpoint nodes of ``[0, 1)``."""

    lambdas: np.ndarray
    values: np.ndarray
    label: str = "KL"

    @property
    def step(self) -> float:
        return 1.0 / self.values.size


def eigh_descending(stack: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batched Hermitian eigendecomposition with a deterministic convention.

    Eigenvalues come out in descending order. Each eigenvector has its
    largest-magnitude entry made real and nonnegative (lowest index wins
    ties), and eigenvectors of equal eigenvalues are ordered by that
    dominant index. Negative eigenvalues within round-off are clamped to 0.
    """
    stack = np.asarray(stack)
    single = stack.ndim == 2
    if single:
        stack = stack[None]
    try:
        w, V = np.linalg.eigh(stack)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise EigensolveFailure(str(exc)) from exc
    w = w[..., ::-1]
    V = V[..., ::-1]

    mag = np.abs(V)
    peak = mag.max(axis=-2, keepdims=True)
    dominant = np.argmax(mag >= peak * (1 - 1e-9), axis=-2)  # (..., P)
    lead = np.take_along_axis(V, dominant[..., None, :], axis=-2)
    V = V * (np.conj(lead) / np.abs(lead))

    scale = np.maximum(np.abs(w[..., :1]), np.finfo(float).tiny)
    gaps = np.diff(w, axis=-1) < -_TIE_RTOL * scale
    cluster = np.concatenate([np.zeros(w.shape[:-1] + (1,), dtype=int), np.cumsum(gaps, axis=-1)], axis=-1)
    P = w.shape[-1]
    order = np.argsort(cluster * P + dominant, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1)
    V = np.take_along_axis(V, order[..., None, :], axis=-1)

    floor = -PSD_RTOL * np.maximum(w[..., :1], 0.0)
    if np.any(w < floor):
        raise ModelInconsistent("matrix is not positive semidefinite")
    w = np.maximum(w, 0.0)
    if single:
        return w[0], V[0]
    return w, V


def kl_decompose(matrix: CyclicPsdMatrix) -> KlDecomposition:
    diag = validate_psd(matrix)
    if not diag.ok:
        raise ModelInconsistent(
            f"invalid cyclic PSD matrix (hermitian residual {diag.relative_hermitian_residual:.3g}, "
            f"min eigenvalue {diag.min_eigenvalue:.3g})"
        )
    w, V = eigh_descending(matrix.entries)
    return KlDecomposition(matrix.sigma, w, V)


def kl_eigenvalues(model: CyclicSpectrumModel, grid: FrequencyGrid) -> np.ndarray:
    """Descending eigenvalues at every sigma node, shape ``(M, P)``."""
    mats = assemble_matrices(model, grid.sigma_nodes)
    w = np.linalg.eigvalsh(mats)[:, ::-1]
    if np.any(w < -PSD_RTOL * np.maximum(w[:, :1], 0.0)):
        raise ModelInconsistent("cyclic PSD matrix is not positive semidefinite")
    return np.maximum(w, 0.0)


def cl_samples(model: CyclicSpectrumModel, grid: FrequencyGrid) -> np.ndarray:
    """PSD samples ``S(sigma + r/P)``, shape ``(M, P)`` (the matrix diagonals)."""
    sig = grid.sigma_nodes
    P = grid.period
    cols = [np.real(model.cyclic_value(0, sig + r / P)) for r in range(P)]
    return np.stack(cols, axis=1)


def _field(samples: np.ndarray, grid: FrequencyGrid, label: str) -> SpectrumDensity:
    # samples[i, p] -> lambda = sigma_i + p/P, stored sub-band major
    return SpectrumDensity(grid.lambda_nodes, np.ascontiguousarray(samples.T).ravel(), label)


def kl_psd_field(model: CyclicSpectrumModel, grid: FrequencyGrid) -> SpectrumDensity:
    return _field(kl_eigenvalues(model, grid), grid, "KL")


def cl_psd_field(model: CyclicSpectrumModel, grid: FrequencyGrid) -> SpectrumDensity:
    return _field(np.maximum(cl_samples(model, grid), 0.0), grid, "CL")


def decreasing_rearrangement(density: SpectrumDensity) -> SpectrumDensity:
    values = np.sort(density.values)[::-1]
    return SpectrumDensity(density.lambdas, values, "rearranged")


def total_power(density: SpectrumDensity) -> float:
    return float(density.values.sum() * density.step)


def cumulative_power(density: SpectrumDensity) -> np.ndarray:
    """Power in ``[0, rho_j)`` at every cell edge ``rho_j = j / (P*M)``, ``j=1..P*M``."""
    return np.cumsum(density.values) * density.step


def partial_power(density: SpectrumDensity, rho: float) -> float:
    """Power in ``[0, rho)``; the density is piecewise constant per cell."""
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must lie in (0, 1)")
    n = density.values.size
    pos = rho * n
    full = int(np.floor(pos))
    acc = density.values[:full].sum()
    if full < n:
        acc += (pos - full) * density.values[full]
    return float(acc * density.step)


def representation_entropy(density: SpectrumDensity) -> float:
    """Differential entropy (nats) of the density normalised to unit mass."""
    total = total_power(density)
    if total <= 0:
        raise ValueError("density has no power")
    p = density.values / total
    plogp = np.zeros_like(p)
    pos = p > 0
    plogp[pos] = p[pos] * np.log(p[pos])
    return float(-plogp.sum() * density.step)


def spectral_flatness(model: CyclicSpectrumModel, grid: FrequencyGrid, noise_power: float = 0.0) -> float:
    """KL spectral flatness: one-step prediction MMSE over process power."""
    from .mmse import mmse_prediction
    from .models import composite_model

    full = composite_model(model, noise_power) if noise_power > 0 else model
    eig = kl_eigenvalues(full, grid)
    power = float(eig.sum() * grid.step)
    if power <= 0:
        raise ValueError("process has no power")
    return mmse_prediction(full, grid) / power
