"""Constant-envelope pulse shaping filters for OQPSK."""

from .errors import DomainError, PrecisionError
from .psf import (
    CeReport,
    Kind,
    Parity,
    PhaseFunction,
    PulseShape,
    Smoothness,
    SmoothnessVerdict,
    beta_of_alpha,
    classify_smoothness,
    eval_phase,
    eval_pulse,
    sample_pulse,
    verify_ce,
)

__all__ = [
    "CeReport", "DomainError", "Kind", "Parity", "PhaseFunction", "PrecisionError",
    "PulseShape", "Smoothness", "SmoothnessVerdict", "beta_of_alpha",
    "classify_smoothness", "eval_phase", "eval_pulse", "sample_pulse", "verify_ce",
]
