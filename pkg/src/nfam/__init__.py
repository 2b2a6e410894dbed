"""Nonlinear combined frequency-amplitude modulation (NFAM) toolkit."""
from .bessel import bessel_j, bessel_j_orders
from .modindex import (
    NANOCONTACT_AMPLITUDE_LAW,
    NANOCONTACT_FREQUENCY_LAW,
    AmplitudeLaw,
    FrequencyLaw,
    ModulationIndexes,
    Tone,
    beta_indexes,
    central_frequency,
    gamma_indexes,
    modulation_indexes,
    power_reduction,
)
from .spectrum import (
    LineSpectrum,
    Truncation,
    UndefinedRatioError,
    nfam_spectrum,
    nfm_spectrum,
    phase_line_coefficients,
    sideband_ratio,
)
from .synth import (
    SamplingPlan,
    TimeSeries,
    line_projection,
    measure_modulation,
    nfam_waveform,
    nfm_waveform,
    periodogram,
)

__version__ = "0.1.0"
