from __future__ import annotations

import logging
import math

import numpy as np
import pytest
from scipy.integrate import trapezoid

from tlsho import observables
from tlsho.errors import ParameterError
from tlsho.observables import (
    SpectrumSeries,
    TimeSeries,
    analytic_fourier,
    branch_of,
    equilibrium_population,
    free_dynamics,
    free_fourier,
    initial_density,
    numeric_fourier,
    oscillator_weights,
    population_dynamics,
    prepare,
    relaxation_and_dephasing_parts,
    solve_trajectory,
    spectrum_of_longtime,
    symmetrized_correlation,
)
from tlsho.params import SystemParams


def test_branch_of():
    assert branch_of("numeric") == "full"
    assert branch_of("jc-free") == "jc"
    with pytest.raises(ParameterError):
        branch_of("exact")


def test_series_validation():
    with pytest.raises(ParameterError):
        TimeSeries(times=np.array([0.0, 1.0]), values=np.array([1.0]))
    with pytest.raises(ParameterError):
        TimeSeries(times=np.array([1.0, 0.0]), values=np.array([1.0, 2.0]))


def test_render_adds_unit_area_lorentzians():
    grid = np.linspace(-50.0, 50.0, 200001)
    series = SpectrumSeries(omega=grid, values=np.zeros_like(grid), peaks=((1.0, 2.0),))
    rendered = series.render(0.01)
    assert trapezoid(rendered, grid) == pytest.approx(2.0, rel=1e-3)
    with pytest.raises(ParameterError):
        series.render(0.0)


def test_combine_merges_peaks():
    grid = np.linspace(0.0, 1.0, 11)
    a = SpectrumSeries(omega=grid, values=np.ones_like(grid), peaks=((0.5, 1.0),))
    b = SpectrumSeries(omega=grid, values=np.full_like(grid, 2.0), peaks=((0.5, 3.0), (0.7, 1.0)))
    combined = SpectrumSeries.combine([(1.0, a), (-0.5, b)])
    np.testing.assert_allclose(combined.values, 0.0)
    assert combined.peaks == ((0.5, -0.5), (0.7, -0.5))


def test_oscillator_weights_are_thermal():
    params = SystemParams(omega=1.0, beta=2.0)
    weights = oscillator_weights(params, 3)
    assert weights[0] == pytest.approx(1 - math.exp(-2.0))
    assert weights[1] / weights[0] == pytest.approx(math.exp(-2.0))
    assert weights.sum() < 1.0


def test_initial_density(unbiased_system, unbiased_params):
    rho0 = unbiased_system.rho0
    np.testing.assert_allclose(rho0, rho0.T)
    assert 0.9 < np.trace(rho0) < 1.01
    with pytest.raises(ParameterError):
        initial_density(unbiased_params, unbiased_system.eigenstates, j_cut=99)


def test_population_starts_localized(unbiased_system, biased_system):
    for system in (unbiased_system, biased_system):
        start = population_dynamics(system, "free", np.array([0.0, 1.0])).values[0]
        assert start == pytest.approx(1.0, abs=0.05)


def test_unbiased_asymptotes_vanish(unbiased_system, unbiased_params):
    assert abs(unbiased_system.coefficients.p0) < 1e-12
    assert abs(unbiased_system.coefficients.p_inf) < 1e-12
    assert abs(equilibrium_population(unbiased_params)) < 1e-12


def test_biased_equilibrium_is_ground_state_weight(biased_system, biased_params):
    # level 0 is almost the bare |g>, whose localized weight is epsilon / Delta_b
    expected = biased_params.epsilon / math.hypot(biased_params.epsilon, biased_params.delta0)
    assert biased_system.coefficients.p_inf == pytest.approx(expected, abs=0.05)


def test_free_dynamics_matches_numeric_without_damping(unbiased_params, t_grid):
    params = unbiased_params.replace(kappa=0.0)
    system = prepare(params)
    numeric = population_dynamics(system, "numeric", t_grid).values
    free = free_dynamics(params, t_grid).values
    assert np.max(np.abs(numeric - free)) < 1e-8


def test_free_spectrum_has_six_lines(unbiased_params):
    grid = np.linspace(0.0, 3.0, 301)
    spectrum = free_fourier(unbiased_params, grid)
    lines = [(position, weight) for position, weight in spectrum.peaks if abs(weight) > 1e-8]
    assert len(lines) == 6
    omega = prepare(unbiased_params).spectrum.omega
    expected = sorted(abs(omega[n, m]) for n, m in ((1, 0), (2, 0), (3, 1), (4, 1), (3, 2), (4, 2)))
    np.testing.assert_allclose(sorted(p for p, _ in lines), expected, atol=1e-12)
    assert sum(w for _, w in lines) == pytest.approx(math.pi, abs=0.2)


def test_parts_sum_to_total(unbiased_system, t_grid):
    trajectory = solve_trajectory(unbiased_system, "numeric", t_grid)
    relax, dephase = relaxation_and_dephasing_parts(trajectory, unbiased_system.coefficients)
    total = population_dynamics(unbiased_system, "numeric", t_grid).values
    np.testing.assert_allclose(relax.values + dephase.values, total, atol=1e-12)


def test_unbiased_population_decays_to_zero(unbiased_system):
    gamma_r = unbiased_system.relaxation().gamma_r
    times = np.linspace(0.0, 30.0 / gamma_r, 3001)
    values = population_dynamics(unbiased_system, "numeric", times).values
    assert abs(values[-1]) < 1e-3


def test_biased_zero_frequency_weight(biased_params, biased_system):
    spectrum = analytic_fourier(biased_params, np.array([0.0, 0.5]))
    coefficients = biased_system.coefficients
    expected = 2 * (coefficients.p0 - coefficients.p_inf) / biased_system.relaxation().gamma_r
    assert spectrum.values[0] == pytest.approx(expected, rel=0.01)
    assert spectrum.peaks == ((0.0, pytest.approx(2 * math.pi * coefficients.p_inf)),)


@pytest.mark.parametrize(("omega", "dominant"), [(0.75, 2), (1.0, 2), (1.5, 1)])
def test_spectral_dominance(unbiased_params, omega, dominant):
    system = prepare(unbiased_params.replace(omega=omega))
    grid = np.linspace(0.0, 2.5, 5001)
    spectrum = spectrum_of_longtime(system, grid)
    lines = system.spectrum.omega
    heights = {n: spectrum.extremum_near(abs(lines[n, 0]), 0.005)[1] for n in (1, 2)}
    other = 1 if dominant == 2 else 2
    assert heights[dominant] > heights[other]


def test_numeric_fourier_of_exponential():
    times = np.linspace(0.0, 200.0, 20001)
    series = TimeSeries(times=times, values=np.exp(-0.1 * times))
    grid = np.array([0.0, 0.5, 1.0])
    spectrum = numeric_fourier(series, grid)
    np.testing.assert_allclose(spectrum.values, 2 * 0.1 / (0.1**2 + grid**2), rtol=1e-3)
    assert spectrum.peaks == ()


def test_numeric_fourier_baseline_becomes_peak():
    times = np.linspace(0.0, 200.0, 20001)
    series = TimeSeries(times=times, values=0.25 + np.exp(-0.1 * times), metadata={"p_inf": 0.25})
    spectrum = numeric_fourier(series, np.array([0.0, 1.0]))
    assert spectrum.peaks == ((0.0, pytest.approx(0.5 * math.pi)),)
    assert spectrum.values[0] == pytest.approx(20.0, rel=1e-3)


def test_numeric_fourier_rejects_undamped_series():
    times = np.linspace(0.0, 100.0, 2001)
    series = TimeSeries(times=times, values=np.cos(times))
    with pytest.raises(ParameterError, match="extend t_max to about"):
        numeric_fourier(series, np.array([0.0, 1.0]))
    windowed = numeric_fourier(series, np.array([0.0, 1.0]), window=lambda t: np.exp(-0.05 * t))
    assert windowed.values[1] > windowed.values[0]


def test_branch_mismatch_rejected(unbiased_system, t_grid):
    with pytest.raises(ParameterError):
        population_dynamics(unbiased_system, "jc-free", t_grid)
    with pytest.raises(ParameterError):
        prepare(SystemParams(epsilon=0.5), branch="jc")


def test_symmetrized_correlation_is_even_in_bias(biased_params):
    times = np.linspace(0.0, 300.0, 3001)
    grid = np.linspace(0.0, 2.0, 101)
    plus = symmetrized_correlation(biased_params, times, grid)
    minus = symmetrized_correlation(biased_params.replace(epsilon=-0.5), times, grid)
    np.testing.assert_array_equal(plus.spectrum.values, minus.spectrum.values)
    assert plus.spectrum.peaks == ()


def test_symmetrized_correlation_needs_damping(unbiased_params):
    with pytest.raises(ParameterError):
        symmetrized_correlation(unbiased_params.replace(kappa=0.0), np.linspace(0, 10, 100), np.linspace(0, 1, 5))


def test_ground_coherence_weight_changes_sign_with_bias(unbiased_params):
    biases = np.arange(0.4, 1.41, 0.05)
    weights = np.array([prepare(unbiased_params.replace(epsilon=e)).coefficients.initial[1, 0] for e in biases])
    assert _first_crossing(biases, weights) == pytest.approx(0.95, abs=0.05)


def _first_crossing(xs: np.ndarray, ys: np.ndarray) -> float:
    flips = np.flatnonzero(np.sign(ys[:-1]) != np.sign(ys[1:]))
    assert flips.size >= 1, ys
    i = flips[0]
    return float(xs[i] - ys[i] * (xs[i + 1] - xs[i]) / (ys[i + 1] - ys[i]))


def _decay_grid(system, step: float = 0.2) -> np.ndarray:
    span = system.decay_time()
    return np.linspace(0.0, span, int(span / step) + 1)


def test_correlation_line_changes_sign_with_its_weight(unbiased_params):
    biases = np.linspace(0.6, 1.2, 7)
    heights, weights = [], []
    for bias in biases:
        params = unbiased_params.replace(epsilon=bias)
        plus = prepare(params)
        minus = prepare(params.replace(epsilon=-bias))
        w_plus = plus.coefficients.initial[1, 0]
        w_minus = minus.coefficients.initial[1, 0]
        # omega_10 weight of P_s + p_inf (P_a - p_inf)
        weights.append(0.5 * (w_plus + w_minus) + plus.coefficients.p_inf * 0.5 * (w_plus - w_minus))
        line = np.array([abs(plus.spectrum.omega[1, 0])])
        heights.append(symmetrized_correlation(params, _decay_grid(plus), line).spectrum.values[0])
    crossing = _first_crossing(biases, np.array(heights))
    assert crossing == pytest.approx(_first_crossing(biases, np.array(weights)), abs=0.05)


def _has_extremum(values: np.ndarray, centre: int, reach: int, sign: float) -> bool:
    signed = sign * values
    lo, hi = max(centre - reach, 1), min(centre + reach, values.size - 2)
    return any(signed[i] > signed[i - 1] and signed[i] > signed[i + 1] for i in range(lo, hi + 1))


def test_detuned_spectrum_has_satellite_peaks_and_dips(unbiased_params):
    # kappa / 10 narrows the omega_10 line enough to separate the omega_31 dip 0.03 above it
    system = prepare(unbiased_params.replace(omega=0.75, kappa=unbiased_params.kappa / 10))
    weights = {(n, m): w for n, m, w in system.coefficients.cosine_terms()}
    grid = np.linspace(0.2, 1.4, 481)
    spectrum = numeric_fourier(population_dynamics(system, "numeric", _decay_grid(system)), grid)
    lines = np.abs(system.spectrum.omega)
    for pair, sign in (((4, 2), 1.0), ((3, 2), 1.0), ((3, 1), -1.0), ((4, 1), -1.0)):
        assert sign * weights[pair] > 0, pair
        centre = int(np.argmin(np.abs(grid - lines[pair])))
        assert _has_extremum(spectrum.values, centre, 2, sign), pair


def test_stationary_state_matches_boltzmann(unbiased_system, biased_system):
    for system in (unbiased_system, biased_system):
        assert system.stationary_gap() < 1e-3


def test_long_time_population_reaches_p_inf(biased_system):
    t_end = 30.0 / biased_system.relaxation().gamma_r
    values = population_dynamics(biased_system, "numeric", np.linspace(0.0, t_end, 3001)).values
    assert abs(values[-1] - biased_system.coefficients.p_inf) <= 1e-2


def test_stationary_gap_is_logged(unbiased_params, monkeypatch, caplog):
    monkeypatch.setattr(observables, "STATIONARY_GAP_TOL", -1.0)
    with caplog.at_level(logging.WARNING, logger="tlsho.observables"):
        prepare(unbiased_params)
    assert "stationary value" in caplog.text


def test_decay_time_covers_detuned_lines(unbiased_params):
    detuned = prepare(unbiased_params.replace(omega=0.75))
    assert detuned.decay_time() > 200.0
    times = _decay_grid(detuned)
    numeric_fourier(population_dynamics(detuned, "numeric", times), np.linspace(0.0, 1.5, 16))
    with pytest.raises(ParameterError):
        prepare(unbiased_params.replace(kappa=0.0)).decay_time()
