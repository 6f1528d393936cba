"""Dunkl-deformed parametric amplifier on a truncated Fock space."""

from .errors import (
    ConvergenceError,
    InstabilityError,
    ParameterError,
    ParityError,
    TruncationError,
)
from .fock import ModelParams, dunkl_number

__all__ = [
    "ConvergenceError",
    "InstabilityError",
    "ModelParams",
    "ParameterError",
    "ParityError",
    "TruncationError",
    "dunkl_number",
]

__version__ = "0.1.0"
