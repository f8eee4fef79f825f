"""apspectra: numerical analysis of uniformly almost periodic signals.

Signals are finite trigonometric polynomials with arbitrary real
frequencies (including truncated Riemann zeta partial sums).  The toolkit
computes Bohr mean values and Bohr-Fourier coefficients, detects Fourier
exponents over a frequency range, estimates total and average total
variation, finds epsilon-almost-periods, and checks the coefficient decay
bound |A_j| <= Vbar(f^(n)) / |lambda_j|^(n+1) together with its classical
1-periodic and zeta-truncation special cases.
"""

__version__ = "0.1.0"

from .almost_periodicity import (
    InclusionLengthEstimate,
    TranslationNumber,
    estimate_inclusion_length,
    find_translation_numbers,
    translation_discrepancies,
)
from .bohr_analysis import (
    MeanValueEstimate,
    SpectralLine,
    SpectrumEstimate,
    bohr_coefficient,
    bohr_mean,
    scan_spectrum,
    windowed_means,
)
from .bounds import BoundEntry, BoundReport, check_decay_bound, check_taibleson
from .errors import (
    ApSpectraError,
    EmptyList,
    InvalidRange,
    NotConverged,
    NotPeriodic,
    SignalFormatError,
    StepTooCoarse,
    ZeroExponent,
    ZeroFrequencyTerm,
)
from .signal_model import (
    Signal,
    TrigPolynomial,
    TrigTerm,
    add,
    as_trig_polynomial,
    conjugate,
    differentiate,
    evaluate,
    integrate,
    load_signal,
    max_frequency,
    multiply,
    scale,
    signal_from_json,
    signal_to_json_dict,
)
from .variation import (
    AverageVariationEstimate,
    VariationEstimate,
    average_variation,
    total_variation,
)
from .zeta_app import (
    ZetaBoundReport,
    ZetaTruncation,
    zeta_bound_experiment,
    zeta_to_trig,
    zeta_variation_lower_bound,
)

__all__ = [
    "ApSpectraError",
    "AverageVariationEstimate",
    "BoundEntry",
    "BoundReport",
    "EmptyList",
    "InclusionLengthEstimate",
    "InvalidRange",
    "MeanValueEstimate",
    "NotConverged",
    "NotPeriodic",
    "Signal",
    "SignalFormatError",
    "SpectralLine",
    "SpectrumEstimate",
    "StepTooCoarse",
    "TranslationNumber",
    "TrigPolynomial",
    "TrigTerm",
    "VariationEstimate",
    "ZeroExponent",
    "ZeroFrequencyTerm",
    "ZetaBoundReport",
    "ZetaTruncation",
    "add",
    "as_trig_polynomial",
    "average_variation",
    "bohr_coefficient",
    "bohr_mean",
    "check_decay_bound",
    "check_taibleson",
    "conjugate",
    "differentiate",
    "estimate_inclusion_length",
    "evaluate",
    "find_translation_numbers",
    "integrate",
    "load_signal",
    "max_frequency",
    "multiply",
    "scale",
    "scan_spectrum",
    "signal_from_json",
    "signal_to_json_dict",
    "total_variation",
    "translation_discrepancies",
    "windowed_means",
    "zeta_bound_experiment",
    "zeta_to_trig",
    "zeta_variation_lower_bound",
]
