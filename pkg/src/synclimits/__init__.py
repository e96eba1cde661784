"""Performance limits of cyclostationary-aware estimation from the cyclic spectrum."""

from .errors import (
    EigensolveFailure,
    InsufficientData,
    LengthMismatch,
    ModelInconsistent,
    NonFiniteIntegrand,
    NotPositiveDefinite,
    SingularMatrix,
    SingularSpectrumWarning,
    SynclimitsError,
    TruncationError,
    UnsupportedDelay,
)
from .kl_transform import (
    KlDecomposition,
    SpectrumDensity,
    cl_psd_field,
    cumulative_power,
    decreasing_rearrangement,
    kl_decompose,
    kl_psd_field,
    partial_power,
    representation_entropy,
    spectral_flatness,
    total_power,
)
from .mmse import (
    AdditiveScenario,
    MmseReport,
    SyncGains,
    coherence_matrix,
    error_cyclic_psd,
    high_snr_asymptote,
    kl_wiener_gains,
    mmse_causal,
    mmse_causal_gsv,
    mmse_causal_wss,
    mmse_noncausal,
    mmse_noncausal_wss,
    mmse_prediction,
    mmse_prediction_wss,
    mmse_report,
    sync_gains,
)
from .models import Pulse, SrrcPamModel, composite_model, pam_cyclic_value, pulse_time_taps, smear_factor
from .spectral_core import (
    CyclicPsdMatrix,
    CyclicSpectrumModel,
    FrequencyGrid,
    FunctionModel,
    QuadratureSpec,
    SumModel,
    WhiteNoiseModel,
    assemble_cyclic_psd_matrix,
    integrate_subband,
    spectral_correlation,
    validate_psd,
)

__version__ = "0.1.0"
