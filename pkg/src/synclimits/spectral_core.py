"""Frequency grids, cyclic spectrum models and cyclic PSD matrix assembly.

All frequencies are dimensionless (cycles/sample) and the full band is
``[0, 1)``. A cyclostationary process of period ``P`` is described by its
cyclic spectrum ``S^(k/P)(f)``; stacking ``P`` samples spaced ``1/P`` apart
gives the ``P x P`` cyclic PSD matrix at a sub-band frequency
``sigma in [0, 1/P)``::

    [S(sigma)]_{r,c} = S^((r-c)/P)(sigma + r/P)

The cycle index ``k = r - c`` is kept signed (it ranges over
``[-(P-1), P-1]``), never reduced modulo ``P``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ModelInconsistent, NonFiniteIntegrand

HERMITIAN_RTOL = 1e-12
PSD_RTOL = 1e-10


@dataclass(frozen=True)
class FrequencyGrid:
    """Midpoint nodes on the sub-band ``[0, 1/P)``.

    ``sigma_i = (i + 1/2) / (P * M)`` for ``i = 0..M-1``. Band edges are never
    sampled, which keeps log-integrands finite at removable singularities.
    """

    period: int
    points_per_subband: int = 1024

    def __post_init__(self):
        if int(self.period) != self.period or self.period < 1:
            raise ValueError(f"period must be a positive integer, got {self.period!r}")
        if int(self.points_per_subband) != self.points_per_subband or self.points_per_subband < 1:
            raise ValueError("points_per_subband must be a positive integer")

    @property
    def step(self) -> float:
        return 1.0 / (self.period * self.points_per_subband)

    @property
    def sigma_nodes(self) -> np.ndarray:
        return (np.arange(self.points_per_subband) + 0.5) * self.step

    @property
    def lambda_nodes(self) -> np.ndarray:
        """Full-band nodes ``sigma_i + p/P``, ordered by sub-band then sigma."""
        offsets = np.arange(self.period)[:, None] / self.period
        return (offsets + self.sigma_nodes[None, :]).ravel()


@dataclass(frozen=True)
class QuadratureSpec:
    rule: str = "midpoint"
    points: int = 1024
    abs_tolerance: float = 1e-9

    def __post_init__(self):
        if self.rule != "midpoint":
            raise ValueError("only the midpoint rule is supported")
        if self.points < 16:
            raise ValueError("quadrature needs at least 16 points per sub-band")

    def grid(self, period: int) -> FrequencyGrid:
        return FrequencyGrid(period, self.points)


class CyclicSpectrumModel:
    """Analytic description of a cyclostationary process.

    Subclasses implement :meth:`cyclic_value`, vectorised over ``f``. They
    must satisfy ``cyclic_value(-k, f) == conj(cyclic_value(k, f + k/P))``
    and return a real nonnegative PSD for ``k == 0``.
    """

    period: int
    signal_power: float

    def cyclic_value(self, k: int, f):
        raise NotImplementedError

    def __add__(self, other: "CyclicSpectrumModel") -> "SumModel":
        return SumModel(self, other)


class FunctionModel(CyclicSpectrumModel):
    """Wrap a plain ``(k, f) -> complex`` callable as a model."""

    def __init__(self, period: int, func: Callable, signal_power: float):
        self.period = int(period)
        self.signal_power = float(signal_power)
        self._func = func

    def cyclic_value(self, k, f):
        return self._func(k, f)


class WhiteNoiseModel(CyclicSpectrumModel):
    """White WSS noise viewed as a (trivially) cyclostationary process."""

    def __init__(self, power: float, period: int = 1):
        if power < 0:
            raise ValueError("noise power must be nonnegative")
        self.period = int(period)
        self.power = float(power)
        self.signal_power = float(power)

    def cyclic_value(self, k, f):
        f = np.asarray(f, dtype=float)
        level = self.power if k == 0 else 0.0
        return np.full(f.shape, level, dtype=complex)

    def __repr__(self):
        return f"WhiteNoiseModel(power={self.power}, period={self.period})"


class SumModel(CyclicSpectrumModel):
    """Sum of two uncorrelated processes sharing a period."""

    def __init__(self, first: CyclicSpectrumModel, second: CyclicSpectrumModel):
        if first.period != second.period and 1 not in (first.period, second.period):
            raise ValueError("cannot add models with incommensurate periods")
        self.first = first
        self.second = second
        self.period = max(first.period, second.period)
        self.signal_power = first.signal_power + second.signal_power

    def cyclic_value(self, k, f):
        return self.first.cyclic_value(k, f) + self.second.cyclic_value(k, f)


@dataclass(frozen=True)
class CyclicPsdMatrix:
    sigma: float
    entries: np.ndarray = field(repr=False)

    @property
    def period(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class PsdDiagnostics:
    hermitian_residual: float
    relative_hermitian_residual: float
    min_eigenvalue: float
    max_eigenvalue: float

    @property
    def is_hermitian(self) -> bool:
        return self.relative_hermitian_residual < HERMITIAN_RTOL

    @property
    def is_psd(self) -> bool:
        return self.min_eigenvalue >= -PSD_RTOL * max(self.max_eigenvalue, 0.0)

    @property
    def ok(self) -> bool:
        return self.is_hermitian and self.is_psd


def _hermitian_residuals(stack: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    resid = np.abs(stack - np.conj(np.swapaxes(stack, -1, -2))).max(axis=(-2, -1))
    scale = np.abs(stack).max(axis=(-2, -1))
    rel = np.divide(resid, scale, out=np.zeros_like(resid), where=scale > 0)
    return resid, rel


def assemble_matrices(model: CyclicSpectrumModel, sigmas) -> np.ndarray:
    """Cyclic PSD matrices at every ``sigma`` in one shot, shape ``(M, P, P)``.

    Raises :class:`ModelInconsistent` when any matrix fails the Hermitian check.
    """
    P = model.period
    sigmas = np.atleast_1d(np.asarray(sigmas, dtype=float))
    if np.any(sigmas < 0) or np.any(sigmas >= 1.0 / P):
        raise ValueError("sigma must lie in [0, 1/P)")
    out = np.empty((sigmas.size, P, P), dtype=complex)
    for r in range(P):
        f = sigmas + r / P
        for c in range(P):
            out[:, r, c] = model.cyclic_value(r - c, f)
    _, rel = _hermitian_residuals(out)
    bad = rel >= HERMITIAN_RTOL
    if np.any(bad):
        i = int(np.argmax(rel))
        raise ModelInconsistent(
            f"cyclic PSD matrix at sigma={sigmas[i]:.6g} is not Hermitian "
            f"(relative residual {rel[i]:.3g})"
        )
    return out


def assemble_cyclic_psd_matrix(model: CyclicSpectrumModel, sigma: float) -> CyclicPsdMatrix:
    entries = assemble_matrices(model, [sigma])[0]
    entries.setflags(write=False)
    return CyclicPsdMatrix(float(sigma), entries)


def spectral_correlation(model: CyclicSpectrumModel, alpha: float, f: float) -> complex:
    """Weight of the spectral-correlation ridge at cycle frequency ``alpha``.

    Zero unless ``alpha`` is a multiple of ``1/P``. Both ``f`` and ``f - alpha``
    are folded into ``[0, 1)`` and the signed cycle index is their difference
    in units of ``1/P``, matching the matrix assembly convention.
    """
    P = model.period
    k_real = alpha * P
    k_round = round(k_real)
    if abs(k_real - k_round) > 1e-9:
        return 0j
    f0 = float(f) % 1.0
    f1 = (f0 - alpha) % 1.0
    k = int(round((f0 - f1) * P))
    return complex(np.asarray(model.cyclic_value(k, np.array([f0])))[0])


def integrate_values(values, grid: FrequencyGrid) -> np.ndarray:
    """Midpoint sum over the sub-band of samples taken at ``grid.sigma_nodes``.

    ``values`` has the sigma axis first; trailing axes are kept.
    """
    values = np.asarray(values)
    if not np.all(np.isfinite(values)):
        raise NonFiniteIntegrand("integrand is not finite at every node")
    return values.sum(axis=0) * grid.step


def integrate_subband(integrand: Callable, grid: FrequencyGrid) -> float:
    """Integrate ``integrand(sigma)`` over ``[0, 1/P)`` with the midpoint rule."""
    nodes = grid.sigma_nodes
    try:
        vals = np.asarray(integrand(nodes))
    except (TypeError, ValueError):
        vals = None
    if vals is None or vals.shape != nodes.shape:
        vals = np.array([integrand(s) for s in nodes])
    if np.iscomplexobj(vals):
        vals = vals.real
    return float(integrate_values(vals.astype(float), grid))


def validate_psd(matrix: CyclicPsdMatrix | np.ndarray) -> PsdDiagnostics:
    A = matrix.entries if isinstance(matrix, CyclicPsdMatrix) else np.asarray(matrix)
    resid, rel = _hermitian_residuals(A)
    w = np.linalg.eigvalsh((A + A.conj().T) / 2)
    return PsdDiagnostics(float(resid), float(rel), float(w[0]), float(w[-1]))
