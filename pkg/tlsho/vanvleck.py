"""Second-order Van-Vleck treatment of the qubit-oscillator Hamiltonian.

The unperturbed levels group into doublets {|j+1 g>, |j e>} (manifold j) plus
the isolated ground state |0 g>. A unitary e^{iS} removes the coupling between
manifolds up to second order in g; each doublet is then a 2x2 problem.

All S tables store the real antisymmetric matrix iS.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .config import DEGENERACY_TOL, default_j_max
from .errors import ParameterError, ResonanceDegeneracyError
from .oracle import ProductBasis
from .params import SystemParams, derive

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VanVleckCoefficients:
    delta: float
    w0: float
    w1: float
    delta_b: float
    omega: float

    def delta_j(self, j: int) -> float:
        """Detuning of doublet j including the second-order shift."""
        return self.delta_b - self.omega - 2 * (j + 1) * self.w0

    def alpha_j(self, j: int) -> float:
        """Mixing angle of doublet j in [0, pi).

        The value pi is reached only for an uncoupled doublet with negative
        detuning, where it keeps |2j+1> on the lower level.
        """
        return math.atan2(2.0 * math.sqrt(j + 1) * abs(self.delta), self.delta_j(j))


def effective_coefficients(params: SystemParams) -> VanVleckCoefficients:
    derived = derive(params)
    delta_b = derived.delta_b
    if delta_b + params.omega <= 0:
        raise ParameterError("Delta_b + Omega must be positive")
    g2 = params.g**2
    coefficients = VanVleckCoefficients(
        delta=-params.g * params.delta0 / delta_b,
        w0=-(params.delta0**2) * g2 / (delta_b**2 * (delta_b + params.omega)),
        w1=-(params.epsilon**2) * g2 / (delta_b**2 * params.omega),
        delta_b=delta_b,
        omega=params.omega,
    )
    logger.debug(
        "Van-Vleck coefficients: Delta=%.6g W0=%.6g W1=%.6g",
        coefficients.delta,
        coefficients.w0,
        coefficients.w1,
    )
    return coefficients


@dataclass(frozen=True)
class Spectrum:
    energies: np.ndarray

    @property
    def n_levels(self) -> int:
        return int(self.energies.shape[0])

    @property
    def omega(self) -> np.ndarray:
        """omega[n, m] = E_n - E_m."""
        return self.energies[:, None] - self.energies[None, :]


def doublet_of(n: int) -> tuple[int, int]:
    """(j, branch) of level n >= 1: branch 0 is the lower member 2j+1, 1 the upper 2j+2."""
    if n < 1:
        raise ValueError("the ground state does not belong to a doublet")
    return (n - 1) // 2, (n - 1) % 2


def eigenenergies(params: SystemParams, n_levels: int) -> Spectrum:
    if n_levels < 1:
        raise ParameterError(f"n_levels must be >= 1, got {n_levels}")
    vv = effective_coefficients(params)
    energies = np.empty(n_levels)
    energies[0] = -vv.delta_b / 2 + vv.w0 + vv.w1
    for n in range(1, n_levels):
        j, branch = doublet_of(n)
        half_gap = 0.5 * math.sqrt(vv.delta_j(j) ** 2 + 4 * (j + 1) * vv.delta**2)
        centre = (j + 0.5) * params.omega + vv.w1 + vv.w0
        energies[n] = centre - half_gap if branch == 0 else centre + half_gap
    return Spectrum(energies=energies)


def check_resonance_guard(params: SystemParams) -> None:
    """Reject Delta_b ~ 2 Omega where the epsilon-proportional second-order terms diverge.

    At epsilon = 0 the offending numerators vanish and the point is allowed.
    """
    if params.epsilon == 0:
        return
    delta_b = derive(params).delta_b
    if abs(2 * params.omega - delta_b) < DEGENERACY_TOL:
        raise ResonanceDegeneracyError(
            f"Delta_b={delta_b:.9g} is within {DEGENERACY_TOL:g} of 2*Omega={2 * params.omega:.9g}; "
            "second-order Van-Vleck is invalid there"
        )


@dataclass(frozen=True)
class TransformationS:
    basis: ProductBasis
    first_order: np.ndarray
    second_order: np.ndarray

    def entries(self, order: int) -> dict[tuple[int, int], float]:
        """Sparse view of the stored upper-triangle entries of one order."""
        table = self.first_order if order == 1 else self.second_order
        rows, cols = np.nonzero(np.triu(table))
        return {(int(r), int(c)): float(table[r, c]) for r, c in zip(rows, cols)}


def build_s_matrix(params: SystemParams, j_max: int) -> TransformationS:
    check_resonance_guard(params)
    basis = ProductBasis(j_max)
    derived = derive(params)
    delta_b, big_omega = derived.delta_b, params.omega
    eps, d0, g = params.epsilon, params.delta0, params.g

    first = np.zeros((basis.dimension, basis.dimension))
    second = np.zeros_like(first)

    def put(table: np.ndarray, row: int, col: int, value: float) -> None:
        table[row, col] = value
        table[col, row] = -value

    z1 = eps * g / (delta_b * big_omega)
    x1 = d0 * g / (delta_b * (delta_b + big_omega))
    eg2 = eps * d0 * g**2
    dd2 = d0**2 * g**2

    for j in range(j_max + 1):
        g_j, e_j = 2 * j, 2 * j + 1
        put(second, g_j, e_j, -0.5 * (2 * j + 1) * eg2 / (delta_b**2 * big_omega * (delta_b + big_omega)))
        if j + 1 <= j_max:
            root = math.sqrt(j + 1)
            put(first, e_j, e_j + 2, root * z1)
            put(first, g_j, g_j + 2, -root * z1)
            put(first, g_j, e_j + 2, root * x1)
        if j + 2 <= j_max:
            root2 = math.sqrt((j + 1) * (j + 2))
            if eps != 0:
                put(second, e_j, g_j + 4, 2 * root2 * eg2 / (delta_b**2 * big_omega * (2 * big_omega - delta_b)))
            put(second, e_j, e_j + 4, -root2 * dd2 / (2 * delta_b**2 * big_omega * (delta_b + big_omega)))
            put(second, g_j, g_j + 4, 0.5 * root2 * dd2 / (delta_b**2 * big_omega * (big_omega + delta_b)))
            put(
                second,
                g_j,
                e_j + 4,
                -root2 * eg2 / (delta_b * big_omega * (delta_b + big_omega) * (delta_b + 2 * big_omega)),
            )
    return TransformationS(basis=basis, first_order=first, second_order=second)


def transform_operator(s: TransformationS, sign: int) -> np.ndarray:
    """e^{sign iS} to second order."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    identity = np.eye(s.basis.dimension)
    return identity + sign * (s.first_order + s.second_order) + 0.5 * s.first_order @ s.first_order


def effective_hamiltonian(params: SystemParams, j_max: int) -> np.ndarray:
    """Block-diagonal second-order effective Hamiltonian in the product basis."""
    vv = effective_coefficients(params)
    basis = ProductBasis(j_max)
    h = np.zeros((basis.dimension, basis.dimension))
    for j in range(j_max + 1):
        h[2 * j, 2 * j] = -vv.delta_b / 2 + j * params.omega + vv.w1 + (j + 1) * vv.w0
        h[2 * j + 1, 2 * j + 1] = vv.delta_b / 2 + j * params.omega + vv.w1 - j * vv.w0
        if j + 1 <= j_max:
            coupling = math.sqrt(j + 1) * vv.delta
            h[2 * j + 1, 2 * j + 2] = h[2 * j + 2, 2 * j + 1] = coupling
    return h


@dataclass(frozen=True)
class EigenstateTable:
    """Coefficients <j g|n> (``ground``) and <j e|n> (``excited``), shape (j_max + 1, n_levels)."""

    ground: np.ndarray
    excited: np.ndarray

    @property
    def j_max(self) -> int:
        return self.ground.shape[0] - 1

    @property
    def n_levels(self) -> int:
        return self.ground.shape[1]

    @property
    def vectors(self) -> np.ndarray:
        """Columns over the product basis (index 2j for g, 2j + 1 for e)."""
        out = np.empty((2 * self.ground.shape[0], self.n_levels))
        out[0::2] = self.ground
        out[1::2] = self.excited
        return out

    @classmethod
    def from_vectors(cls, vectors: np.ndarray) -> EigenstateTable:
        return cls(ground=np.array(vectors[0::2]), excited=np.array(vectors[1::2]))


def effective_states(coefficients: VanVleckCoefficients, n_levels: int, j_max: int) -> np.ndarray:
    """Eigenvectors of the effective Hamiltonian, columns over the product basis."""
    basis = ProductBasis(j_max)
    states = np.zeros((basis.dimension, n_levels))
    states[basis.index(0, "g"), 0] = 1.0
    for n in range(1, n_levels):
        j, branch = doublet_of(n)
        if j + 1 > j_max:
            raise ParameterError(f"j_max={j_max} too small for level {n}")
        half = coefficients.alpha_j(j) / 2
        c, s = math.cos(half), math.sin(half)
        if branch == 0:
            states[basis.index(j + 1, "g"), n] = c
            states[basis.index(j, "e"), n] = s
        else:
            states[basis.index(j + 1, "g"), n] = -s
            states[basis.index(j, "e"), n] = c
    return states


def eigenstates(params: SystemParams, n_levels: int, j_max: int | None = None) -> EigenstateTable:
    """|n> = e^{-iS}|n>_eff tabulated over the product basis."""
    j_max = default_j_max(n_levels) if j_max is None else j_max
    s = build_s_matrix(params, j_max)
    dressed = transform_operator(s, -1) @ effective_states(effective_coefficients(params), n_levels, j_max)
    return EigenstateTable.from_vectors(dressed)


def general_generator(
    h0_diag: np.ndarray, coupling: np.ndarray, manifold: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """First and second order iS from the general Van-Vleck formulas.

    ``h0_diag`` are unperturbed energies, ``coupling`` the perturbation matrix
    and ``manifold`` an integer label per basis state. iS vanishes inside a
    manifold.
    """
    energies = np.asarray(h0_diag, dtype=float)
    v = np.asarray(coupling, dtype=float)
    labels = np.asarray(manifold)
    size = energies.shape[0]
    first = np.zeros((size, size))
    second = np.zeros((size, size))
    for a in range(size):
        for b in range(size):
            if labels[a] == labels[b]:
                continue
            if v[a, b] != 0.0:
                first[a, b] = v[a, b] / (energies[a] - energies[b])
            total = 0.0
            gap = energies[b] - energies[a]
            for c in range(size):
                product = v[a, c] * v[c, b]
                if product == 0.0:
                    continue
                if labels[c] == labels[b]:
                    total += product / (gap * (energies[c] - energies[a]))
                elif labels[c] == labels[a]:
                    total += product / (gap * (energies[c] - energies[b]))
                else:
                    total += 0.5 * product / gap * (
                        1.0 / (energies[c] - energies[a]) + 1.0 / (energies[c] - energies[b])
                    )
            second[a, b] = total
    return first, second


def doublet_manifolds(basis: ProductBasis) -> np.ndarray:
    """Manifold label per product state: |j g> -> j - 1, |j e> -> j."""
    labels = np.empty(basis.dimension, dtype=int)
    for j in range(basis.j_max + 1):
        labels[2 * j] = j - 1
        labels[2 * j + 1] = j
    return labels
