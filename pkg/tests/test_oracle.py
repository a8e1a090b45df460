from __future__ import annotations

import math

import numpy as np
import pytest

from tlsho.errors import NumericalError, ParameterError
from tlsho.jaynes_cummings import jc_spectrum
from tlsho.oracle import (
    ProductBasis,
    align,
    build_hamiltonian,
    diagonalize,
    numeric_position_elements,
    position_operator,
)
from tlsho.params import SystemParams


def test_product_basis_layout():
    basis = ProductBasis(3)
    assert basis.dimension == 8
    assert basis.index(0, "g") == 0
    assert basis.index(2, "e") == 5
    assert basis.labels()[:4] == ["0g", "0e", "1g", "1e"]


def test_product_basis_rejects_bad_labels():
    basis = ProductBasis(2)
    with pytest.raises(ValueError):
        basis.index(0, "x")
    with pytest.raises(IndexError):
        basis.index(3, "g")


def test_hamiltonian_is_symmetric(biased_params):
    h = build_hamiltonian(biased_params, 8).elements
    np.testing.assert_array_equal(h, h.T)


def test_uncoupled_hamiltonian_is_diagonal():
    params = SystemParams(epsilon=0.5, g=0.0, omega=0.8)
    h = build_hamiltonian(params, 5).elements
    delta_b = math.hypot(0.5, 1.0)
    expected = [s * delta_b / 2 + j * 0.8 for j in range(6) for s in (-1, 1)]
    np.testing.assert_allclose(np.diag(h), expected)
    assert np.count_nonzero(h - np.diag(np.diag(h))) == 0


def test_rotating_wave_drops_counter_rotating_entries(unbiased_params):
    full = build_hamiltonian(unbiased_params, 6).elements
    rwa = build_hamiltonian(unbiased_params, 6, rotating_wave=True).elements
    # |0 g> <-> |1 e>
    assert full[0, 3] != 0.0
    assert rwa[0, 3] == 0.0
    # |0 e> <-> |1 g> is kept
    assert rwa[1, 2] == full[1, 2] != 0.0


def test_j_max_must_be_positive(unbiased_params):
    with pytest.raises(ParameterError):
        build_hamiltonian(unbiased_params, 0)


def test_diagonalize_ascending_and_orthonormal(biased_params):
    decomp = diagonalize(build_hamiltonian(biased_params, 10))
    assert np.all(np.diff(decomp.energies) >= 0)
    np.testing.assert_allclose(decomp.vectors.T @ decomp.vectors, np.eye(22), atol=1e-12)


def test_diagonalize_rejects_asymmetric_matrix():
    with pytest.raises(ParameterError):
        diagonalize(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_rwa_oracle_reproduces_jaynes_cummings_spectrum(unbiased_params):
    for omega in (0.75, 1.0, 1.5):
        params = unbiased_params.replace(omega=omega)
        decomp = diagonalize(build_hamiltonian(params, 12, rotating_wave=True))
        expected = np.sort(jc_spectrum(params, 5).energies)
        np.testing.assert_allclose(decomp.energies[:5], expected, atol=1e-12)


def test_position_operator_ladder():
    basis = ProductBasis(4)
    x = position_operator(basis)
    np.testing.assert_array_equal(x, x.T)
    assert x[basis.index(2, "g"), basis.index(3, "g")] == pytest.approx(math.sqrt(3))
    assert x[basis.index(2, "g"), basis.index(3, "e")] == 0.0


def test_numeric_position_elements_symmetric(biased_params):
    basis = ProductBasis(10)
    decomp = diagonalize(build_hamiltonian(biased_params, 10))
    x = numeric_position_elements(decomp, basis, 5)
    assert x.shape == (5, 5)
    np.testing.assert_allclose(x, x.T)


def test_align_recovers_own_vectors(biased_params):
    decomp = diagonalize(build_hamiltonian(biased_params, 8))
    reference = -decomp.vectors[:, [2, 0, 1]]
    aligned = align(decomp, reference)
    np.testing.assert_allclose(aligned.vectors, reference, atol=1e-12)
    np.testing.assert_allclose(aligned.overlaps, 1.0)
    np.testing.assert_allclose(aligned.energies, decomp.energies[[2, 0, 1]])


def test_align_rejects_ambiguous_reference(biased_params):
    decomp = diagonalize(build_hamiltonian(biased_params, 8))
    reference = decomp.vectors[:, [0, 0]]
    with pytest.raises(NumericalError):
        align(decomp, reference)
