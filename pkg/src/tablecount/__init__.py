"""Exact and asymptotic counting of nonnegative integer matrices with
prescribed row and column sums."""

from .asymptotics import (
    Decomposition,
    LogEstimate,
    SemiregularSpec,
    cm_estimate,
    decompose_MP1P2E,
    delta_from_count,
    estimate,
    estimate_01,
    estimate_main,
    estimate_moment_form,
    estimate_near_regular,
    estimate_restricted,
    estimate_semiregular,
    log_factorial,
)
from .exact import (
    EntryAlphabet,
    TableCounter,
    TableMatrix,
    count_bruteforce,
    count_exact,
    expected_moments,
    row_sum_distribution,
    sample_uniform,
)
from .margins import (
    MarginPair,
    MomentSummary,
    RegimeReport,
    central_moments,
    classify_regime,
    falling_factorial,
    power_sums,
    validate_margins,
)

__version__ = "0.1.0"

__all__ = [
    "Decomposition",
    "EntryAlphabet",
    "LogEstimate",
    "MarginPair",
    "MomentSummary",
    "RegimeReport",
    "SemiregularSpec",
    "TableCounter",
    "TableMatrix",
    "central_moments",
    "classify_regime",
    "cm_estimate",
    "count_bruteforce",
    "count_exact",
    "decompose_MP1P2E",
    "delta_from_count",
    "estimate",
    "estimate_01",
    "estimate_main",
    "estimate_moment_form",
    "estimate_near_regular",
    "estimate_restricted",
    "estimate_semiregular",
    "expected_moments",
    "falling_factorial",
    "log_factorial",
    "power_sums",
    "row_sum_distribution",
    "sample_uniform",
    "validate_margins",
]
