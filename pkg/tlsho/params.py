"""Physical parameters, derived quantities and bath spectral functions.

Units: hbar = 1 and Delta0 = 1 unless a caller chooses a different delta0.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from .config import OMEGA_ZERO_THRESHOLD
from .errors import NumericalError, ParameterError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SystemParams:
    """Bias, tunneling, coupling, oscillator and bath parameters of one model point."""

    epsilon: float = 0.0
    delta0: float = 1.0
    g: float = 0.18
    omega: float = 1.0
    kappa: float = 0.0154
    beta: float = 10.0

    def __post_init__(self) -> None:
        for name in ("epsilon", "delta0", "g", "omega", "kappa", "beta"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
                raise ParameterError(f"{name} must be a finite number, got {value!r}")
        if self.delta0 <= 0:
            raise ParameterError(f"delta0 must be > 0, got {self.delta0}")
        if self.g < 0:
            raise ParameterError(f"g must be >= 0, got {self.g}")
        if self.omega <= 0:
            raise ParameterError(f"omega must be > 0, got {self.omega}")
        if self.kappa < 0:
            raise ParameterError(f"kappa must be >= 0, got {self.kappa}")
        if self.beta <= 0:
            raise ParameterError(f"beta must be > 0, got {self.beta}")

    @property
    def perturbative(self) -> bool:
        """False when g is too large for second-order Van-Vleck to be trusted."""
        delta_b = math.hypot(self.epsilon, self.delta0)
        return self.g < 0.5 * min(self.omega, delta_b)

    def replace(self, **changes: Any) -> SystemParams:
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict[str, float]:
        return {field.name: float(getattr(self, field.name)) for field in dataclasses.fields(self)}


@dataclass(frozen=True)
class DerivedParams:
    delta_b: float
    theta: float
    localized_angle: float


def derive(params: SystemParams) -> DerivedParams:
    """Energy splitting and mixing angle of the bare qubit.

    ``theta`` follows tan(theta) = -delta0/epsilon folded into [-pi/2, pi/2).
    ``localized_angle`` is the same angle without the fold; it defines the
    localized state |R> in the energy basis and is what observables use.
    The two coincide for epsilon >= 0.
    """
    delta_b = math.hypot(params.epsilon, params.delta0)
    angle = math.atan2(-params.delta0, params.epsilon)
    theta = angle
    if theta < -math.pi / 2:
        theta += math.pi
    elif theta >= math.pi / 2:
        theta -= math.pi
    return DerivedParams(delta_b=delta_b, theta=theta, localized_angle=angle)


def ohmic_density(omega_arg: ArrayLike, kappa: float) -> np.ndarray | float:
    """Ohmic bath density G(omega) = kappa * omega, odd in omega."""
    w = np.asarray(omega_arg, dtype=float)
    return kappa * w if w.ndim else kappa * float(w)


def alpha_from_g(params: SystemParams) -> float:
    """Dimensionless qubit-bath damping of the mapped spin-boson model."""
    return 8.0 * params.kappa * params.g**2 / params.omega**2


def g_from_alpha(alpha: float, omega: float, kappa: float) -> float:
    if alpha < 0 or kappa <= 0 or omega <= 0:
        raise ParameterError("alpha >= 0, kappa > 0 and omega > 0 are required")
    return omega * math.sqrt(alpha / (8.0 * kappa))


def effective_density(omega_arg: ArrayLike, params: SystemParams) -> np.ndarray | float:
    """Peaked spectral density seen by the qubit once the oscillator is traced out."""
    w = np.asarray(omega_arg, dtype=float)
    big_omega = params.omega
    alpha = alpha_from_g(params)
    numerator = 2.0 * alpha * w * big_omega**4
    denominator = (big_omega**2 - w**2) ** 2 + (2.0 * math.pi * params.kappa * w * big_omega) ** 2
    value = numerator / denominator
    return value if w.ndim else float(value)


def thermal_factor(omega_arg: ArrayLike, beta: float) -> np.ndarray | float:
    """Bose factor N(omega) = [coth(beta*omega/2) - 1]/2.

    Raises NumericalError at omega = 0, where N has a pole.
    """
    w = np.asarray(omega_arg, dtype=float)
    if np.any(w == 0.0):
        raise NumericalError("thermal_factor has a pole at omega = 0; use thermal_rate for G*N products")
    x = beta * np.abs(w)
    with np.errstate(over="ignore"):
        positive = 1.0 / np.expm1(x)
    value = np.where(w > 0, positive, -1.0 - positive)
    return value if w.ndim else float(value)


def thermal_rate(omega_arg: ArrayLike, kappa: float, beta: float) -> np.ndarray | float:
    """G(omega)N(omega) with the omega -> 0 limit kappa/beta substituted below threshold."""
    w = np.asarray(omega_arg, dtype=float)
    small = np.abs(w) < OMEGA_ZERO_THRESHOLD
    safe = np.where(small, 1.0, w)
    x = beta * np.abs(safe)
    with np.errstate(over="ignore"):
        positive = 1.0 / np.expm1(x)
    occupation = np.where(safe > 0, positive, -1.0 - positive)
    value = np.where(small, kappa / beta, kappa * safe * occupation)
    return value if w.ndim else float(value)
