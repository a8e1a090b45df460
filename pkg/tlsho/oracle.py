"""Brute-force reference: the truncated qubit-oscillator Hamiltonian, diagonalized exactly.

Product basis ordering is |j g> -> 2j and |j e> -> 2j + 1. The qubit part is
already in the energy eigenbasis of the bare two-level system.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NumericalError, ParameterError
from .params import SystemParams, derive

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-10
ORTHONORMALITY_TOL = 1e-12


@dataclass(frozen=True)
class ProductBasis:
    j_max: int

    @property
    def dimension(self) -> int:
        return 2 * (self.j_max + 1)

    def index(self, j: int, qubit: str) -> int:
        if qubit not in ("g", "e"):
            raise ValueError(f"qubit label must be 'g' or 'e', got {qubit!r}")
        if not 0 <= j <= self.j_max:
            raise IndexError(f"oscillator index {j} outside 0..{self.j_max}")
        return 2 * j + (1 if qubit == "e" else 0)

    def labels(self) -> list[str]:
        return [f"{j}{q}" for j in range(self.j_max + 1) for q in ("g", "e")]


@dataclass(frozen=True)
class DenseHamiltonian:
    basis: ProductBasis
    elements: np.ndarray


@dataclass(frozen=True)
class EigenDecomposition:
    energies: np.ndarray
    vectors: np.ndarray


def build_hamiltonian(params: SystemParams, j_max: int, *, rotating_wave: bool = False) -> DenseHamiltonian:
    """Truncated Hamiltonian in the product basis.

    With ``rotating_wave`` the counter-rotating entries (|j g> <-> |j+1 e>) and
    the sigma_z coupling are zeroed, which leaves the Jaynes-Cummings model.
    """
    if j_max < 1:
        raise ParameterError(f"j_max must be >= 1, got {j_max}")
    if j_max < 4:
        logger.warning("j_max=%d is below the recommended minimum of 4", j_max)

    derived = derive(params)
    basis = ProductBasis(j_max)
    h = np.zeros((basis.dimension, basis.dimension))
    z_coupling = params.g * params.epsilon / derived.delta_b
    x_coupling = -params.g * params.delta0 / derived.delta_b

    for j in range(j_max + 1):
        h[2 * j, 2 * j] = -derived.delta_b / 2 + j * params.omega
        h[2 * j + 1, 2 * j + 1] = derived.delta_b / 2 + j * params.omega
        if j == j_max:
            continue
        ladder = math.sqrt(j + 1)
        g_j, e_j = 2 * j, 2 * j + 1
        g_next, e_next = 2 * (j + 1), 2 * (j + 1) + 1
        # |j e> <-> |j+1 g> is the energy-conserving (rotating) pair.
        h[e_j, g_next] = h[g_next, e_j] = x_coupling * ladder
        if rotating_wave:
            continue
        h[g_j, e_next] = h[e_next, g_j] = x_coupling * ladder
        h[g_j, g_next] = h[g_next, g_j] = z_coupling * ladder
        h[e_j, e_next] = h[e_next, e_j] = -z_coupling * ladder

    return DenseHamiltonian(basis=basis, elements=h)


def diagonalize(hamiltonian: DenseHamiltonian | np.ndarray) -> EigenDecomposition:
    """Full ascending spectrum; each vector's largest-magnitude component is made positive."""
    h = hamiltonian.elements if isinstance(hamiltonian, DenseHamiltonian) else np.asarray(hamiltonian, dtype=float)
    if not np.allclose(h, h.T, atol=1e-14, rtol=0.0):
        raise ParameterError("diagonalize requires a symmetric matrix")
    try:
        energies, vectors = scipy.linalg.eigh(h)
    except scipy.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver did not converge: {exc}") from exc

    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    vectors = vectors * signs

    residual = np.max(np.linalg.norm(h @ vectors - vectors * energies, axis=0)) if h.size else 0.0
    defect = np.max(np.abs(vectors.T @ vectors - np.eye(h.shape[0]))) if h.size else 0.0
    if residual > RESIDUAL_TOL * max(1.0, float(np.max(np.abs(energies), initial=1.0))):
        raise NumericalError(f"eigenvector residual {residual:.3e} exceeds {RESIDUAL_TOL:.0e}")
    if defect > ORTHONORMALITY_TOL * h.shape[0]:
        raise NumericalError(f"eigenvectors not orthonormal (defect {defect:.3e})")
    return EigenDecomposition(energies=energies, vectors=vectors)


def position_operator(basis: ProductBasis) -> np.ndarray:
    """B + B^dagger acting on the oscillator factor of the product basis."""
    x = np.zeros((basis.dimension, basis.dimension))
    for j in range(basis.j_max):
        ladder = math.sqrt(j + 1)
        for offset in (0, 1):
            x[2 * j + offset, 2 * (j + 1) + offset] = ladder
            x[2 * (j + 1) + offset, 2 * j + offset] = ladder
    return x


def numeric_position_elements(
    decomp: EigenDecomposition, basis: ProductBasis, n_levels: int | None = None
) -> np.ndarray:
    """X_nm = <n|(B + B^dagger)|m> over the lowest ``n_levels`` oracle states."""
    vectors = decomp.vectors if n_levels is None else decomp.vectors[:, :n_levels]
    x = vectors.T @ position_operator(basis) @ vectors
    return 0.5 * (x + x.T)


@dataclass(frozen=True)
class AlignedStates:
    energies: np.ndarray
    vectors: np.ndarray
    overlaps: np.ndarray


def align(decomp: EigenDecomposition, reference: np.ndarray) -> AlignedStates:
    """Pick and sign oracle eigenvectors so they match the columns of ``reference``.

    Each reference column is paired with the oracle vector of largest
    |overlap|; the sign is chosen so the overlap is positive.
    """
    reference = np.asarray(reference, dtype=float)
    if reference.shape[0] != decomp.vectors.shape[0]:
        raise ValueError(
            f"reference has {reference.shape[0]} rows, oracle basis has {decomp.vectors.shape[0]}"
        )
    overlaps = decomp.vectors.T @ reference
    picks = np.argmax(np.abs(overlaps), axis=0)
    if len(set(picks.tolist())) != len(picks):
        raise NumericalError("reference states do not map one-to-one onto oracle eigenvectors")
    columns = np.arange(reference.shape[1])
    signs = np.sign(overlaps[picks, columns])
    vectors = decomp.vectors[:, picks] * signs
    return AlignedStates(
        energies=decomp.energies[picks],
        vectors=vectors,
        overlaps=np.abs(overlaps[picks, columns]),
    )
