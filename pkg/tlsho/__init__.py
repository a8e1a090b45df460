"""Biased qubit coupled to a damped harmonic oscillator: spectra, rates and dynamics."""

from .errors import ConfigError, NumericalError, ParameterError, TlshoError
from .observables import (
    SOLVERS,
    analytic_fourier,
    free_dynamics,
    numeric_fourier,
    population_dynamics,
    prepare,
    symmetrized_correlation,
)
from .params import SystemParams, derive
from .redfield import rate_tensor, relaxation_rate
from .vanvleck import eigenenergies, eigenstates

__version__ = "0.1.0"

__all__ = [
    "SOLVERS",
    "ConfigError",
    "NumericalError",
    "ParameterError",
    "SystemParams",
    "TlshoError",
    "analytic_fourier",
    "derive",
    "eigenenergies",
    "eigenstates",
    "free_dynamics",
    "numeric_fourier",
    "population_dynamics",
    "prepare",
    "rate_tensor",
    "relaxation_rate",
    "symmetrized_correlation",
]
