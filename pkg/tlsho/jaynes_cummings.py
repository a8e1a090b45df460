"""Rotating-wave (Jaynes-Cummings) comparison branch.

Without the counter-rotating terms S vanishes, so the doublet states are exact
two-component superpositions and no second-order shifts appear.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .config import default_j_max
from .errors import ParameterError
from .oracle import ProductBasis, position_operator
from .params import SystemParams, derive
from .vanvleck import EigenstateTable, Spectrum, VanVleckCoefficients, doublet_of, effective_states

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class JcSpectrum(Spectrum):
    delta_jc: float = 0.0
    alpha: tuple[float, ...] = ()


def _require_unbiased(params: SystemParams) -> None:
    if params.epsilon != 0:
        raise ParameterError(
            f"the Jaynes-Cummings branch is defined for epsilon = 0 only (got epsilon={params.epsilon}); "
            "with bias the sigma_z coupling has no rotating-wave counterpart"
        )


def _jc_coefficients(params: SystemParams) -> VanVleckCoefficients:
    delta_b = derive(params).delta_b
    return VanVleckCoefficients(
        delta=-params.g * params.delta0 / delta_b,
        w0=0.0,
        w1=0.0,
        delta_b=delta_b,
        omega=params.omega,
    )


def jc_spectrum(params: SystemParams, n_levels: int) -> JcSpectrum:
    _require_unbiased(params)
    if n_levels < 1:
        raise ParameterError(f"n_levels must be >= 1, got {n_levels}")
    jc = _jc_coefficients(params)
    energies = np.empty(n_levels)
    energies[0] = -jc.delta_b / 2
    doublets = n_levels // 2
    for n in range(1, n_levels):
        j, branch = doublet_of(n)
        half_gap = 0.5 * math.sqrt(jc.delta_j(j) ** 2 + 4 * (j + 1) * jc.delta**2)
        centre = (j + 0.5) * params.omega
        energies[n] = centre - half_gap if branch == 0 else centre + half_gap
    return JcSpectrum(
        energies=energies,
        delta_jc=jc.delta_b - params.omega,
        alpha=tuple(jc.alpha_j(j) for j in range(doublets)),
    )


def jc_eigenstates(params: SystemParams, n_levels: int, j_max: int | None = None) -> EigenstateTable:
    _require_unbiased(params)
    j_max = default_j_max(n_levels) if j_max is None else j_max
    return EigenstateTable.from_vectors(effective_states(_jc_coefficients(params), n_levels, j_max))


def jc_position_elements(params: SystemParams, n_levels: int, j_max: int | None = None) -> np.ndarray:
    """X_nm in the undressed Jaynes-Cummings eigenbasis."""
    table = jc_eigenstates(params, n_levels, j_max)
    vectors = table.vectors
    return vectors.T @ position_operator(ProductBasis(table.j_max)) @ vectors


def selection_allowed(n: int, m: int) -> bool:
    """Whether p_nm can be nonzero for the unbiased Jaynes-Cummings eigenstates."""
    if n < 0 or m < 0:
        raise ValueError("level indices must be non-negative")
    if n == m:
        return False
    if n == 0 or m == 0:
        return max(n, m) in (1, 2)
    if n % 2 == m % 2:
        return abs(n - m) == 2
    even, odd = (n, m) if n % 2 == 0 else (m, n)
    return even - odd == 3 or odd - even == 1


def bloch_siegert_resonance(params: SystemParams, j: int) -> float:
    """Oscillator frequency at which doublet j is resonant once counter-rotating shifts are included."""
    if j < 0:
        raise ValueError("j must be >= 0")
    delta_b = derive(params).delta_b
    return delta_b * math.sqrt(1 + 2 * (j + 1) * params.delta0**2 * params.g**2 / delta_b**4)
