"""Exact information bottleneck curves, critical rates and minimal-cardinality
optimal representations for uniform-input n-ary Hamming channels."""
from .errors import NumericalError, RegimeError, ValidationError
from .hamming import HammingParams, gamma_compose, h_n, h_n_inverse, hamming_channel
from .oracle import (
    SearchConfig,
    TightnessReport,
    envelope_bruteforce,
    ib_constrained_search,
    phi_bruteforce,
    tightness_check,
)
from .phi_curve import (
    CriticalPoints,
    CurvePoint,
    critical_rate,
    eta,
    ib_value,
    inflection_point,
    phi,
    phi_envelope,
    phi_slope,
    sample_curve,
)
from .prob_core import (
    bayes_reverse,
    channel,
    compose,
    distribution,
    entropy,
    mutual_information,
    output_distribution,
)
from .representations import Representation, optimal_representation, validate_representation

__version__ = "0.1.0"
