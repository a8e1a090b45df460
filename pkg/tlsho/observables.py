"""Population difference P(t), its Fourier transform and the symmetrized correlation.

P(t) = <R| rho_qubit(t) |R> - <L| rho_qubit(t) |L> is assembled from the
density matrix in the dressed eigenbasis through real weights: p_nn for the
populations and p_nm (n > m) for the real parts of the coherences.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.integrate import trapezoid

from .config import (
    DEFAULT_J_CUT,
    DEFAULT_N_LEVELS,
    PEAK_WIDTH,
    STATIONARY_GAP_TOL,
    WINDOW_E_FOLDS,
    default_j_max,
)
from .coupling import analytic_x
from .errors import NumericalError, ParameterError
from .jaynes_cummings import jc_eigenstates, jc_position_elements, jc_spectrum
from .params import SystemParams, derive
from .redfield import (
    DensityTrajectory,
    RateTensor,
    RelaxationSpec,
    propagate_numeric,
    rate_tensor,
    relaxation_spec,
    solve_fsa,
    solve_psa,
    stationary_populations,
)
from .vanvleck import EigenstateTable, Spectrum, eigenenergies, eigenstates

logger = logging.getLogger(__name__)

SOLVERS = ("numeric", "fsa", "psa", "longtime", "free", "jc-numeric", "jc-free")

# Fraction of the series used to judge decay and fit the tail rate.
TAIL_FRACTION = 0.1
# Residual amplitude in the tail, relative to the largest one, above which a
# series counts as non-decaying.
DECAY_LIMIT = 0.2
# Cosine weights below this do not set the automatic time window.
WINDOW_WEIGHT_TOL = 1e-3
# Frequencies transformed per block in numeric_fourier.
FOURIER_BLOCK = 128


def branch_of(solver: str) -> str:
    if solver not in SOLVERS:
        raise ParameterError(f"unknown solver {solver!r}; expected one of {', '.join(SOLVERS)}")
    return "jc" if solver.startswith("jc-") else "full"


# ---------------------------------------------------------------------------
# Series containers
# ---------------------------------------------------------------------------


def _check_grid(grid: np.ndarray, name: str) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ParameterError(f"{name} must be a non-empty 1-d grid")
    if np.any(np.diff(grid) <= 0):
        raise ParameterError(f"{name} must be strictly increasing")
    return grid


@dataclass(frozen=True)
class TimeSeries:
    times: np.ndarray
    values: np.ndarray
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        times = _check_grid(self.times, "time grid")
        values = np.asarray(self.values, dtype=float)
        if values.shape != times.shape:
            raise ParameterError(f"{values.shape[0]} values for {times.shape[0]} times")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class SpectrumSeries:
    """Continuous spectrum on a frequency grid plus delta peaks kept as (position, weight)."""

    omega: np.ndarray
    values: np.ndarray
    peaks: tuple[tuple[float, float], ...] = ()
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        omega = _check_grid(self.omega, "frequency grid")
        values = np.asarray(self.values, dtype=float)
        if values.shape != omega.shape:
            raise ParameterError(f"{values.shape[0]} values for {omega.shape[0]} frequencies")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "peaks", tuple(sorted((float(p), float(w)) for p, w in self.peaks)))

    def render(self, width: float = PEAK_WIDTH) -> np.ndarray:
        """Continuous part with every delta peak broadened into a Lorentzian of half-width ``width``."""
        if width <= 0:
            raise ParameterError("peak width must be positive")
        out = self.values.copy()
        for position, weight in self.peaks:
            out += weight * (width / math.pi) / ((self.omega - position) ** 2 + width**2)
        return out

    def extremum_near(self, position: float, half_window: float) -> tuple[float, float]:
        """(omega, value) of the largest-|value| grid point within ``half_window`` of ``position``."""
        mask = np.abs(self.omega - position) <= half_window
        if not np.any(mask):
            raise ParameterError(f"no grid point within {half_window} of {position}")
        idx = np.flatnonzero(mask)
        best = idx[np.argmax(np.abs(self.values[idx]))]
        return float(self.omega[best]), float(self.values[best])

    @classmethod
    def combine(cls, terms: Sequence[tuple[float, SpectrumSeries]]) -> SpectrumSeries:
        """Linear combination sum(c * s) of spectra on a common grid."""
        if not terms:
            raise ParameterError("combine needs at least one term")
        grid = terms[0][1].omega
        values = np.zeros_like(grid)
        peaks: dict[float, float] = {}
        for scale, series in terms:
            if series.omega.shape != grid.shape or not np.array_equal(series.omega, grid):
                raise ParameterError("spectra must share the frequency grid")
            values = values + scale * series.values
            for position, weight in series.peaks:
                peaks[position] = peaks.get(position, 0.0) + scale * weight
        return cls(omega=grid, values=values, peaks=tuple(peaks.items()), metadata=dict(terms[0][1].metadata))


# ---------------------------------------------------------------------------
# Weights and initial state
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PopulationCoefficients:
    """diagonal[n] = p_nn / rho_nn, off_diagonal[n, m] = p_nm / Re rho_nm (n != m)."""

    diagonal: np.ndarray
    off_diagonal: np.ndarray
    p0: float = 0.0
    p_inf: float = 0.0
    initial: np.ndarray | None = None

    @property
    def n_levels(self) -> int:
        return int(self.diagonal.shape[0])

    def evaluate(self, states: np.ndarray) -> np.ndarray:
        """P for one density matrix or a stack of them."""
        states = np.asarray(states)
        lower = np.tril(self.off_diagonal, -1)
        diag = np.real(np.einsum("...nn->...n", states)) @ self.diagonal
        return diag + np.einsum("nm,...nm->...", lower, np.real(states))

    def cosine_terms(self, tol: float = 0.0) -> list[tuple[int, int, float]]:
        """(n, m, p_nm(0)) for n > m with |p_nm(0)| > tol."""
        if self.initial is None:
            raise ParameterError("coefficients were built without an initial state")
        terms = []
        for n in range(self.n_levels):
            for m in range(n):
                weight = float(self.initial[n, m])
                if abs(weight) > tol:
                    terms.append((n, m, weight))
        return terms


def _localized_weights(table: EigenstateTable, theta: float, j_max: int | None) -> np.ndarray:
    rows = table.j_max if j_max is None else j_max
    if rows > table.j_max:
        raise ParameterError(f"j_max={rows} exceeds the eigenstate table ({table.j_max})")
    g = table.ground[: rows + 1]
    e = table.excited[: rows + 1]
    return math.cos(theta) * (g.T @ g - e.T @ e) + math.sin(theta) * (e.T @ g + g.T @ e)


def population_coefficients(
    table: EigenstateTable,
    theta: float,
    j_max: int | None = None,
    *,
    rho0: np.ndarray | None = None,
    stationary: np.ndarray | None = None,
) -> PopulationCoefficients:
    weights = _localized_weights(table, theta, j_max)
    diagonal = np.diag(weights).copy()
    off = 2.0 * weights
    np.fill_diagonal(off, 0.0)

    p0 = 0.0
    initial = None
    if rho0 is not None:
        rho0 = np.asarray(rho0)
        p0 = float(np.real(np.diag(rho0)) @ diagonal)
        initial = np.tril(off * np.real(rho0), -1)
    p_inf = 0.0 if stationary is None else float(np.asarray(stationary) @ diagonal)
    return PopulationCoefficients(diagonal=diagonal, off_diagonal=off, p0=p0, p_inf=p_inf, initial=initial)


def oscillator_weights(params: SystemParams, j_cut: int) -> np.ndarray:
    """Boltzmann occupation of oscillator levels 0..j_cut, normalized over all levels."""
    if j_cut < 0:
        raise ParameterError(f"j_cut must be >= 0, got {j_cut}")
    x = params.beta * params.omega
    return -np.expm1(-x) * np.exp(-x * np.arange(j_cut + 1))


def initial_density(params: SystemParams, table: EigenstateTable, j_cut: int = DEFAULT_J_CUT) -> np.ndarray:
    """rho(0) = |R><R| x thermal oscillator, in the dressed eigenbasis.

    The oscillator sum stops at ``j_cut`` and the second-order transform is
    unitary only up to O(g^3), so the trace differs from one at that order
    and may exceed it.
    """
    if j_cut > table.j_max:
        raise ParameterError(f"j_cut={j_cut} exceeds the eigenstate table ({table.j_max})")
    half = derive(params).localized_angle / 2
    amplitudes = math.cos(half) * table.ground[: j_cut + 1] + math.sin(half) * table.excited[: j_cut + 1]
    weights = oscillator_weights(params, j_cut)
    return np.einsum("j,jn,jm->nm", weights, amplitudes, amplitudes)


def boltzmann_populations(energies: np.ndarray, beta: float) -> np.ndarray:
    shifted = -beta * (np.asarray(energies) - np.min(energies))
    weights = np.exp(shifted)
    return weights / weights.sum()


def equilibrium_population(
    params: SystemParams, n_levels: int = DEFAULT_N_LEVELS, j_max: int | None = None
) -> float:
    """p_inf under a Boltzmann distribution over the retained dressed levels."""
    j_max = default_j_max(n_levels) if j_max is None else j_max
    spectrum = eigenenergies(params, n_levels)
    table = eigenstates(params, n_levels, j_max)
    stationary = boltzmann_populations(spectrum.energies, params.beta)
    weights = _localized_weights(table, derive(params).localized_angle, None)
    return float(stationary @ np.diag(weights))


# ---------------------------------------------------------------------------
# Prepared system and dispatch
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DissipativeSystem:
    params: SystemParams
    branch: str
    spectrum: Spectrum
    eigenstates: EigenstateTable
    x: np.ndarray
    rates: RateTensor
    rho0: np.ndarray
    coefficients: PopulationCoefficients

    @property
    def n_levels(self) -> int:
        return self.spectrum.n_levels

    @property
    def gamma(self) -> np.ndarray:
        """FSA dephasing rates Gamma_nm = -pi L[n, m, n, m]."""
        idx = np.arange(self.n_levels)
        return -math.pi * self.rates.values[idx[:, None], idx[None, :], idx[:, None], idx[None, :]]

    def relaxation(self) -> RelaxationSpec:
        return relaxation_spec(self.rates, derive(self.params).delta_b, self.params.omega)

    def stationary_gap(self) -> float:
        """|p_inf| difference between the kernel of the population block and the Boltzmann weights."""
        kernel = stationary_populations(self.rates)
        return abs(float(kernel @ self.coefficients.diagonal) - self.coefficients.p_inf)

    def decay_time(self, e_folds: float = WINDOW_E_FOLDS) -> float:
        """Time over which every weighted component of P(t) decays by ``e_folds`` e-folds."""
        coefficients = self.coefficients
        rates = [float(self.gamma[n, m]) for n, m, _ in coefficients.cosine_terms(WINDOW_WEIGHT_TOL)]
        if abs(coefficients.p0 - coefficients.p_inf) > WINDOW_WEIGHT_TOL:
            rates.append(self.relaxation().gamma_r)
        if not rates:
            return 0.0
        slowest = min(rates)
        if slowest <= 0:
            raise ParameterError("P(t) has undamped components; a decay window needs kappa > 0")
        return e_folds / slowest

    def metadata(self, solver: str) -> dict[str, Any]:
        return {
            "solver": solver,
            "branch": self.branch,
            "p0": self.coefficients.p0,
            "p_inf": self.coefficients.p_inf,
            "params": self.params.as_dict(),
        }


def prepare(
    params: SystemParams,
    n_levels: int = DEFAULT_N_LEVELS,
    j_max: int | None = None,
    j_cut: int = DEFAULT_J_CUT,
    branch: str = "full",
) -> DissipativeSystem:
    """Spectrum, eigenstates, X, rates, rho(0) and P weights for one parameter point."""
    if branch not in ("full", "jc"):
        raise ParameterError(f"branch must be 'full' or 'jc', got {branch!r}")
    j_max = default_j_max(n_levels) if j_max is None else j_max
    if not params.perturbative:
        logger.warning(
            "g=%.4g is outside the perturbative regime (g < min(Omega, Delta_b)/2); results are advisory",
            params.g,
        )
    if branch == "jc":
        spectrum: Spectrum = jc_spectrum(params, n_levels)
        table = jc_eigenstates(params, n_levels, j_max)
        x = jc_position_elements(params, n_levels, j_max)
    else:
        spectrum = eigenenergies(params, n_levels)
        table = eigenstates(params, n_levels, j_max)
        x = analytic_x(params, n_levels)

    rates = rate_tensor(spectrum, x, params)
    rho0 = initial_density(params, table, j_cut)
    coefficients = population_coefficients(
        table,
        derive(params).localized_angle,
        rho0=rho0,
        stationary=boltzmann_populations(spectrum.energies, params.beta),
    )
    system = DissipativeSystem(
        params=params,
        branch=branch,
        spectrum=spectrum,
        eigenstates=table,
        x=x,
        rates=rates,
        rho0=rho0,
        coefficients=coefficients,
    )
    if params.kappa > 0:
        _check_stationary(system)
    return system


def _check_stationary(system: DissipativeSystem) -> None:
    try:
        gap = system.stationary_gap()
    except NumericalError as exc:
        logger.warning("no unique stationary state for the rate tensor: %s", exc)
        return
    if gap > STATIONARY_GAP_TOL:
        logger.warning(
            "Boltzmann p_inf=%.6g differs from the rate-tensor stationary value by %.3e",
            system.coefficients.p_inf,
            gap,
        )


def _free_values(system: DissipativeSystem, times: np.ndarray) -> np.ndarray:
    values = np.full(times.shape, system.coefficients.p0)
    omega = system.spectrum.omega
    for n, m, weight in system.coefficients.cosine_terms():
        values += weight * np.cos(omega[n, m] * times)
    return values


def _longtime_values(system: DissipativeSystem, times: np.ndarray) -> np.ndarray:
    coefficients = system.coefficients
    gamma_r = system.relaxation().gamma_r
    gamma = system.gamma
    omega = system.spectrum.omega
    values = (coefficients.p0 - coefficients.p_inf) * np.exp(-gamma_r * times) + coefficients.p_inf
    for n, m, weight in coefficients.cosine_terms():
        values += weight * np.exp(-gamma[n, m] * times) * np.cos(omega[n, m] * times)
    return values


def population_from_trajectory(
    trajectory: DensityTrajectory, coefficients: PopulationCoefficients
) -> TimeSeries:
    if trajectory.states.shape[1] != coefficients.n_levels:
        raise ParameterError(
            f"trajectory has {trajectory.states.shape[1]} levels, coefficients {coefficients.n_levels}"
        )
    return TimeSeries(
        times=trajectory.times,
        values=coefficients.evaluate(trajectory.states),
        metadata={"solver": trajectory.solver, "p_inf": coefficients.p_inf},
    )


def solve_trajectory(system: DissipativeSystem, solver: str, t_grid: np.ndarray) -> DensityTrajectory:
    """Density-matrix trajectory for the trajectory-based solvers."""
    times = _check_grid(t_grid, "time grid")
    if solver in ("numeric", "jc-numeric"):
        return propagate_numeric(system.rho0, system.spectrum, system.rates, times)
    if solver == "fsa":
        return solve_fsa(system.rho0, system.spectrum, system.rates, times)
    if solver == "psa":
        return solve_psa(system.rho0, system.spectrum, system.rates, times)
    raise ParameterError(f"solver {solver!r} does not produce a density-matrix trajectory")


def population_dynamics(system: DissipativeSystem, solver: str, t_grid: np.ndarray) -> TimeSeries:
    if branch_of(solver) != system.branch:
        raise ParameterError(f"solver {solver!r} needs the {branch_of(solver)} branch, system is {system.branch}")
    times = _check_grid(t_grid, "time grid")
    if solver in ("free", "jc-free"):
        values = _free_values(system, times)
    elif solver == "longtime":
        values = _longtime_values(system, times)
    else:
        values = population_from_trajectory(solve_trajectory(system, solver, times), system.coefficients).values
    return TimeSeries(times=times, values=values, metadata=system.metadata(solver))


def relaxation_and_dephasing_parts(
    trajectory: DensityTrajectory, coefficients: PopulationCoefficients
) -> tuple[TimeSeries, TimeSeries]:
    """P(t) split into the population (relaxation) and coherence (dephasing) contributions."""
    total = population_from_trajectory(trajectory, coefficients)
    relax = np.real(np.einsum("tnn->tn", trajectory.states)) @ coefficients.diagonal
    meta = dict(total.metadata)
    return (
        TimeSeries(times=total.times, values=relax, metadata={**meta, "part": "relaxation"}),
        TimeSeries(times=total.times, values=total.values - relax, metadata={**meta, "part": "dephasing"}),
    )


# ---------------------------------------------------------------------------
# Parameter-level entry points
# ---------------------------------------------------------------------------


def free_dynamics(
    params: SystemParams,
    t_grid: np.ndarray,
    *,
    n_levels: int = DEFAULT_N_LEVELS,
    j_cut: int = DEFAULT_J_CUT,
    branch: str = "full",
) -> TimeSeries:
    """Undamped multi-cosine P(t)."""
    system = prepare(params, n_levels=n_levels, j_cut=j_cut, branch=branch)
    return population_dynamics(system, "free" if branch == "full" else "jc-free", t_grid)


def free_fourier(
    params: SystemParams,
    omega_grid: np.ndarray,
    *,
    n_levels: int = DEFAULT_N_LEVELS,
    j_cut: int = DEFAULT_J_CUT,
    branch: str = "full",
) -> SpectrumSeries:
    """Delta-peak spectrum of the undamped dynamics."""
    system = prepare(params, n_levels=n_levels, j_cut=j_cut, branch=branch)
    return spectrum_of_free(system, omega_grid)


def spectrum_of_free(system: DissipativeSystem, omega_grid: np.ndarray) -> SpectrumSeries:
    grid = _check_grid(omega_grid, "frequency grid")
    omega = system.spectrum.omega
    peaks = [(abs(float(omega[n, m])), math.pi * weight) for n, m, weight in system.coefficients.cosine_terms()]
    if system.coefficients.p0 != 0.0:
        peaks.append((0.0, 2 * math.pi * system.coefficients.p0))
    solver = "free" if system.branch == "full" else "jc-free"
    return SpectrumSeries(omega=grid, values=np.zeros_like(grid), peaks=tuple(peaks), metadata=system.metadata(solver))


def longtime_population(
    params: SystemParams,
    t_grid: np.ndarray,
    *,
    n_levels: int = DEFAULT_N_LEVELS,
    j_cut: int = DEFAULT_J_CUT,
    branch: str = "full",
) -> TimeSeries:
    system = prepare(params, n_levels=n_levels, j_cut=j_cut, branch=branch)
    times = _check_grid(t_grid, "time grid")
    return TimeSeries(times=times, values=_longtime_values(system, times), metadata=system.metadata("longtime"))


def _lorentzian_pair(omega: np.ndarray, centre: float, width: float) -> np.ndarray:
    return width * (1.0 / (width**2 + (centre + omega) ** 2) + 1.0 / (width**2 + (centre - omega) ** 2))


def analytic_fourier(
    params: SystemParams,
    omega_grid: np.ndarray,
    *,
    n_levels: int = DEFAULT_N_LEVELS,
    j_cut: int = DEFAULT_J_CUT,
    branch: str = "full",
) -> SpectrumSeries:
    """Closed-form F(omega) = 2 int_0^inf cos(omega t) P(t) dt of the long-time ansatz."""
    system = prepare(params, n_levels=n_levels, j_cut=j_cut, branch=branch)
    return spectrum_of_longtime(system, omega_grid)


def spectrum_of_longtime(system: DissipativeSystem, omega_grid: np.ndarray) -> SpectrumSeries:
    grid = _check_grid(omega_grid, "frequency grid")
    coefficients = system.coefficients
    values = np.zeros_like(grid)
    peaks: list[tuple[float, float]] = []

    gamma_r = system.relaxation().gamma_r
    relax = coefficients.p0 - coefficients.p_inf
    if gamma_r > 0:
        values += 2 * relax * gamma_r / (grid**2 + gamma_r**2)
    elif relax != 0.0:
        peaks.append((0.0, 2 * math.pi * relax))
    if coefficients.p_inf != 0.0:
        peaks.append((0.0, 2 * math.pi * coefficients.p_inf))

    gamma = system.gamma
    omega = system.spectrum.omega
    for n, m, weight in coefficients.cosine_terms():
        centre = abs(float(omega[n, m]))
        if gamma[n, m] > 0:
            values += weight * _lorentzian_pair(grid, centre, float(gamma[n, m]))
        else:
            peaks.append((centre, math.pi * weight))
    return SpectrumSeries(omega=grid, values=values, peaks=tuple(peaks), metadata=system.metadata("longtime"))


def numeric_fourier(
    series: TimeSeries,
    omega_grid: np.ndarray,
    *,
    baseline: float | None = None,
    window: Callable[[np.ndarray], np.ndarray] | None = None,
) -> SpectrumSeries:
    """Cosine transform of a sampled series by the trapezoidal rule.

    The constant ``baseline`` (default: the series' ``p_inf``) becomes a delta
    peak at zero. The residual beyond the last sample is continued as an
    exponential decay with the rate seen over the tail of the series. Without
    ``window`` a residual that has not decayed is rejected.
    """
    grid = _check_grid(omega_grid, "frequency grid")
    times = series.times
    if times.size < 20:
        raise ParameterError("numeric_fourier needs at least 20 samples")
    level = float(series.metadata.get("p_inf", 0.0)) if baseline is None else float(baseline)
    residual = series.values - level

    span = times[-1] - times[0]
    tail = times >= times[-1] - TAIL_FRACTION * span
    before = (times >= times[-1] - 2 * TAIL_FRACTION * span) & ~tail
    peak_amp = float(np.max(np.abs(residual)))
    tail_amp = float(np.max(np.abs(residual[tail])))
    earlier = float(np.max(np.abs(residual[before]))) if np.any(before) else tail_amp
    rate = 1.0 / span
    if 0 < tail_amp < earlier:
        rate = max(rate, math.log(earlier / tail_amp) / (TAIL_FRACTION * span))

    if window is not None:
        residual = residual * window(times)
    elif peak_amp > 0 and tail_amp > DECAY_LIMIT * peak_amp:
        needed = times[-1] + math.log(tail_amp / (0.5 * DECAY_LIMIT * peak_amp)) / rate
        raise ParameterError(
            f"series has not decayed (tail/peak = {tail_amp / peak_amp:.3f}); "
            f"extend t_max to about {needed:.0f} or supply a window"
        )

    values = np.empty_like(grid)
    for start in range(0, grid.size, FOURIER_BLOCK):
        block = grid[start : start + FOURIER_BLOCK]
        values[start : start + block.size] = 2.0 * trapezoid(np.cos(np.outer(block, times)) * residual, times, axis=1)

    if window is None and tail_amp > 0:
        end_value = float(residual[-1])
        end = times[-1]
        values += 2 * end_value * (rate * np.cos(grid * end) - grid * np.sin(grid * end)) / (rate**2 + grid**2)

    peaks = ((0.0, 2 * math.pi * level),) if level != 0.0 else ()
    return SpectrumSeries(omega=grid, values=values, peaks=peaks, metadata={**series.metadata, "baseline": level})


@dataclass(frozen=True)
class CorrelationResult:
    series: TimeSeries
    spectrum: SpectrumSeries
    p_inf: float


def symmetrized_correlation(
    params: SystemParams,
    t_grid: np.ndarray,
    omega_grid: np.ndarray,
    *,
    solver: str = "numeric",
    n_levels: int = DEFAULT_N_LEVELS,
    j_cut: int = DEFAULT_J_CUT,
) -> CorrelationResult:
    """S(t) = P_s(t) + p_inf (P_a(t) - p_inf) and its cosine transform.

    P_s and P_a are the even and odd parts in epsilon, obtained from two runs
    at +|epsilon| and -|epsilon|, so the result depends on |epsilon| only.
    """
    if params.kappa == 0:
        raise ParameterError("the symmetrized correlation needs kappa > 0 to reach a stationary state")
    branch = branch_of(solver)
    bias = abs(params.epsilon)
    plus = prepare(params.replace(epsilon=bias), n_levels=n_levels, j_cut=j_cut, branch=branch)
    minus = prepare(params.replace(epsilon=-bias), n_levels=n_levels, j_cut=j_cut, branch=branch)
    p_plus = population_dynamics(plus, solver, t_grid)
    p_minus = population_dynamics(minus, solver, t_grid) if bias != 0 else p_plus

    p_inf = plus.coefficients.p_inf
    symmetric = 0.5 * (p_plus.values + p_minus.values)
    antisymmetric = 0.5 * (p_plus.values - p_minus.values)
    values = symmetric + p_inf * (antisymmetric - p_inf)

    meta = {**plus.metadata(solver), "epsilon": bias, "p_inf": 0.0}
    series = TimeSeries(times=p_plus.times, values=values, metadata=meta)
    return CorrelationResult(series=series, spectrum=numeric_fourier(series, omega_grid, baseline=0.0), p_inf=p_inf)
