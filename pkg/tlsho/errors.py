"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class TlshoError(Exception):
    """Base class for every error raised by tlsho."""

    exit_code = 1


class ParameterError(TlshoError, ValueError):
    """Physical parameters violate their invariants."""

    exit_code = 2


class ConfigError(TlshoError):
    """A run configuration file or flag set cannot be used."""

    exit_code = 2


class NumericalError(TlshoError):
    """A solver, eigensolver or perturbative guard failed."""

    exit_code = 3


class ResonanceDegeneracyError(NumericalError):
    """Delta_b is too close to 2 Omega for second-order Van-Vleck."""


class DegeneratePairError(NumericalError):
    """A partial-secular 2x2 generator is defective (R = 0)."""
