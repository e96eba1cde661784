"""Time-domain simulation and estimation tools."""

from .estimation import CyclicSpectrumEstimate, estimate_cyclic_spectrum
from .filters import FreshFilterBank, apply_fresh, apply_kl_wiener, design_cwf, empirical_mse
from .invariance import timeshift_spectrum_check
from .prediction import (
    FinitePredictor,
    autocorrelation_kernel,
    design_predictor,
    finite_prediction_mmse,
    prediction_mmse_by_order,
)
from .realization import Realization, dump_realization, generate_realization, load_dump

__all__ = [
    "CyclicSpectrumEstimate",
    "FinitePredictor",
    "FreshFilterBank",
    "Realization",
    "apply_fresh",
    "apply_kl_wiener",
    "autocorrelation_kernel",
    "design_cwf",
    "design_predictor",
    "dump_realization",
    "empirical_mse",
    "estimate_cyclic_spectrum",
    "finite_prediction_mmse",
    "generate_realization",
    "load_dump",
    "prediction_mmse_by_order",
    "timeshift_spectrum_check",
]
