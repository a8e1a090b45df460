"""Bloch-Redfield rate tensor and the solvers built on it.

The master equation in the dressed eigenbasis reads

    d rho_nm / dt = -i omega_nm rho_nm + pi * sum_kl L[n, m, k, l] rho_kl

Four solvers are provided: direct numerical propagation, the full secular
approximation (FSA), the partial secular approximation (PSA) which keeps the
quasi-degenerate coherence pairs coupled, and the single-rate long-time
ansatz whose rate comes from :func:`relaxation_spec`.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.integrate import solve_ivp

from .config import FSA_DENOMINATOR_TOL, INTEGRATOR_ATOL, INTEGRATOR_RTOL, POSITIVITY_FLOOR
from .coupling import analytic_x, coupling_factors
from .errors import DegeneratePairError, NumericalError, ParameterError
from .params import SystemParams, derive, ohmic_density, thermal_rate
from .vanvleck import Spectrum, doublet_of, effective_coefficients, eigenenergies

logger = logging.getLogger(__name__)

# Population transfer between the ground state and the second doublet is
# fourth order in g once X_03, X_04 ~ g^2 are squared.
TRUNCATED_TRANSFERS: tuple[tuple[int, int], ...] = ((0, 3), (0, 4))

# Coherence pairs coupled by the partial secular approximation.
PSA_PAIRS: tuple[tuple[tuple[int, int], tuple[int, int]], ...] = (
    ((0, 1), (0, 2)),
    ((1, 3), (2, 3)),
    ((1, 4), (2, 4)),
)

PAIR_DEGENERACY_TOL = 1e-14


# ---------------------------------------------------------------------------
# Rate tensor
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RateTensor:
    """Dense L[n, m, k, l] together with the inputs it was built from."""

    values: np.ndarray
    omega: np.ndarray
    x: np.ndarray
    kappa: float
    beta: float
    truncated: tuple[tuple[int, int], ...] = ()

    @property
    def n_levels(self) -> int:
        return int(self.values.shape[0])

    def __getitem__(self, key: tuple[int, int, int, int]) -> float:
        return float(self.values[key])

    def population_block(self) -> np.ndarray:
        """M[j, k] = L[j, j, k, k]."""
        idx = np.arange(self.n_levels)
        return self.values[idx[:, None], idx[:, None], idx[None, :], idx[None, :]]

    def thermal_products(self) -> np.ndarray:
        """A[a, b] = G(omega_ab) N(omega_ab)."""
        return np.asarray(thermal_rate(self.omega, self.kappa, self.beta))

    def transfer_pairs(self) -> list[tuple[int, int]]:
        return [
            (j, k)
            for j in range(self.n_levels)
            for k in range(j + 1, self.n_levels)
            if (j, k) not in self.truncated
        ]

    def identity_residuals(self) -> dict[str, float]:
        """Largest violation of each structural identity of the tensor."""
        a = self.thermal_products()
        x2 = self.x**2
        independent = 0.0
        balance = 0.0
        for j, k in self.transfer_pairs():
            independent = max(independent, abs(self.values[j, j, k, k] - 2 * a[j, k] * x2[j, k]))
            upward = self.values[k, k, j, j]
            expected = self.values[j, j, k, k] + 2 * float(ohmic_density(self.omega[j, k], self.kappa)) * x2[j, k]
            balance = max(balance, abs(upward - expected))

        n = self.n_levels
        trace_rows = np.einsum("nnkl->kl", self.values)
        column_sums = float(np.max(np.abs(self.population_block().sum(axis=0)))) if n else 0.0
        vanishing = max((abs(self.values[j, j, k, k]) for j, k in self.truncated), default=0.0)
        vanishing = max(vanishing, max((abs(self.values[k, k, j, j]) for j, k in self.truncated), default=0.0))
        return {
            "independent_rates": float(independent),
            "detailed_balance": float(balance),
            "column_sums": column_sums,
            "trace_conservation": float(np.max(np.abs(trace_rows))) if n else 0.0,
            "vanishing_transfers": float(vanishing),
        }

    def generator(self) -> np.ndarray:
        """Liouvillian acting on row-major flattened rho."""
        n = self.n_levels
        return -1j * np.diag(self.omega.reshape(n * n)) + math.pi * self.values.reshape(n * n, n * n)


def rate_tensor(spectrum: Spectrum, x: np.ndarray, params: SystemParams) -> RateTensor:
    """Evaluate L[n, m, k, l] for the given levels and oscillator matrix elements.

        L = [A_nk + A_ml] X_nk X_lm - delta_ml sum_j X_nj A_jk X_jk - delta_nk sum_j A_jl X_lj X_jm

    with A_ab = G(omega_ab) N(omega_ab); the second bracket term uses
    -G(omega_lm) N_ml = A_ml because G is odd. Ground-to-second-doublet
    population transfers are dropped and their weight moved onto the
    diagonal so every population column still sums to zero.
    """
    x = np.asarray(x, dtype=float)
    omega = spectrum.omega
    if x.shape != omega.shape:
        raise ParameterError(f"X has shape {x.shape}, spectrum has {spectrum.n_levels} levels")

    a = np.asarray(thermal_rate(omega, params.kappa, params.beta))
    n = spectrum.n_levels
    eye = np.eye(n)
    feed = x @ (a * x)
    drain = (a.T * x) @ x
    values = (a[:, None, :, None] + a[None, :, None, :]) * x[:, None, :, None] * x.T[None, :, None, :]
    values -= np.einsum("ml,nk->nmkl", eye, feed)
    values -= np.einsum("nk,lm->nmkl", eye, drain)

    truncated: tuple[tuple[int, int], ...] = ()
    if n >= 5:
        truncated = TRUNCATED_TRANSFERS
        for j, k in truncated:
            down, up = values[j, j, k, k], values[k, k, j, j]
            values[j, j, k, k] = 0.0
            values[k, k, k, k] += down
            values[k, k, j, j] = 0.0
            values[j, j, j, j] += up

    logger.debug("rate tensor over %d levels, max |L| = %.3e", n, float(np.max(np.abs(values), initial=0.0)))
    return RateTensor(
        values=values,
        omega=omega,
        x=x,
        kappa=params.kappa,
        beta=params.beta,
        truncated=truncated,
    )


def closed_form_dephasing(
    params: SystemParams, rates: RateTensor
) -> dict[tuple[int, int, int, int], tuple[float, float]]:
    """Closed-form dephasing and pair-coupling entries next to the tensor values.

    Returns ``{(n, m, k, l): (closed_form, tensor)}``. The closed forms treat
    every zero-frequency product through kappa/beta and keep only the
    downward population rates, so they agree with the tensor to the extent
    the upward rates are negligible: about 1e-8 at beta = 40 and 6e-6 on
    the diagonal entries at beta = 10, unbiased.
    """
    if rates.n_levels < 5:
        raise ParameterError("closed-form dephasing entries need n_levels >= 5")
    L = rates.values
    a = rates.thermal_products()
    x = rates.x
    zero = params.kappa / params.beta
    l0 = coupling_factors(params).l0
    vv = effective_coefficients(params)
    c0, c1 = math.cos(vv.alpha_j(0)), math.cos(vv.alpha_j(1))
    z = 4 * zero * l0**2

    down01, down02 = L[0, 0, 1, 1], L[0, 0, 2, 2]
    into3 = L[1, 1, 3, 3] + L[2, 2, 3, 3]
    into4 = L[1, 1, 4, 4] + L[2, 2, 4, 4]

    def tail(target: int) -> float:
        # -sum over the populated partners of G N X X for the coupled pair entries
        return float(
            -a[0, target] * x[0, 1] * x[0, 2]
            - a[3, target] * x[1, 3] * x[2, 3]
            - a[4, target] * x[1, 4] * x[2, 4]
        )

    closed = {
        (0, 1, 0, 1): z * (2 * c0 - c0**2 - 1) - 0.5 * down01,
        (0, 2, 0, 2): z * (-2 * c0 - c0**2 - 1) - 0.5 * down02,
        (0, 3, 0, 3): z * (2 * c1 - c1**2 - 1) - 0.5 * into3,
        (0, 4, 0, 4): z * (-2 * c1 - c1**2 - 1) - 0.5 * into4,
        (1, 2, 1, 2): -4 * z * c0**2 - 0.5 * (down01 + down02),
        (1, 3, 1, 3): -z * (c0 - c1) ** 2 - 0.5 * (down01 + into3),
        (1, 4, 1, 4): -z * (c0 + c1) ** 2 - 0.5 * (down01 + into4),
        (2, 3, 2, 3): -z * (c0 + c1) ** 2 - 0.5 * (down02 + into3),
        (2, 4, 2, 4): -z * (c0 - c1) ** 2 - 0.5 * (down02 + into4),
        (3, 4, 3, 4): -4 * z * c1**2 - 0.5 * (into3 + into4),
        (0, 1, 0, 2): 4 * zero * (x[0, 0] * x[1, 2] - x[1, 2] * x[2, 2]) - a[1, 2] * x[1, 1] * x[1, 2] + tail(2),
        (0, 2, 0, 1): 4 * zero * (x[0, 0] * x[1, 2] - x[1, 2] * x[1, 1]) - a[2, 1] * x[2, 2] * x[1, 2] + tail(1),
        (1, 3, 2, 3): 4 * zero * (x[3, 3] * x[1, 2] - x[1, 2] * x[2, 2])
        - a[1, 2] * (x[1, 1] * x[1, 2] - x[1, 2] * x[3, 3])
        + tail(2),
        (2, 3, 1, 3): 4 * zero * (x[3, 3] * x[1, 2] - x[1, 2] * x[1, 1])
        - a[2, 1] * (x[2, 2] * x[1, 2] - x[1, 2] * x[3, 3])
        + tail(1),
        (1, 4, 2, 4): 4 * zero * (x[4, 4] * x[1, 2] - x[1, 2] * x[2, 2])
        - a[1, 2] * (x[1, 1] * x[1, 2] - x[1, 2] * x[4, 4])
        + tail(2),
        (2, 4, 1, 4): 4 * zero * (x[4, 4] * x[1, 2] - x[1, 2] * x[1, 1])
        - a[2, 1] * (x[2, 2] * x[1, 2] - x[1, 2] * x[4, 4])
        + tail(1),
    }
    return {key: (float(value), float(L[key])) for key, value in closed.items()}


def stationary_populations(rates: RateTensor) -> np.ndarray:
    """Normalized null vector of the full population block."""
    kernel = scipy.linalg.null_space(rates.population_block(), rcond=1e-12)
    if kernel.shape[1] != 1:
        raise NumericalError(f"population block has a {kernel.shape[1]}-dimensional kernel")
    vector = np.clip(kernel[:, 0] / kernel[:, 0].sum(), 0.0, None)
    return vector / vector.sum()


# ---------------------------------------------------------------------------
# Trajectories
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DensityTrajectory:
    """Density matrices on a time grid.

    ``integrator_hermiticity`` is the largest |rho - rho^dagger| the integrator
    produced before the stored states were symmetrized (zero for closed forms).
    """

    times: np.ndarray
    states: np.ndarray
    solver: str
    integrator_hermiticity: float = 0.0

    def populations(self) -> np.ndarray:
        return np.real(np.einsum("tnn->tn", self.states))

    def trace_deviation(self) -> float:
        """Largest drift of the trace away from its initial value."""
        traces = np.einsum("tnn->t", self.states)
        return float(np.max(np.abs(traces - traces[0])))

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.states - np.conj(np.transpose(self.states, (0, 2, 1))))))

    def min_eigenvalues(self) -> np.ndarray:
        hermitian = 0.5 * (self.states + np.conj(np.transpose(self.states, (0, 2, 1))))
        return np.linalg.eigvalsh(hermitian)[:, 0]

    def check_positivity(self, floor: float = POSITIVITY_FLOOR) -> float:
        """Log excursions below ``floor``; returns the smallest eigenvalue seen."""
        lowest = float(np.min(self.min_eigenvalues()))
        if lowest < floor:
            logger.warning("%s trajectory leaves the positive cone: min eigenvalue %.3e", self.solver, lowest)
        return lowest


def _check_inputs(rho0: np.ndarray, spectrum: Spectrum, rates: RateTensor, t_grid: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    rho0 = np.asarray(rho0, dtype=complex)
    times = np.asarray(t_grid, dtype=float)
    n = spectrum.n_levels
    if rho0.shape != (n, n) or rates.n_levels != n:
        raise ParameterError(f"rho0 {rho0.shape}, spectrum {n} and rate tensor {rates.n_levels} levels disagree")
    if times.ndim != 1 or times.size == 0 or times[0] < 0 or np.any(np.diff(times) <= 0):
        raise ParameterError("t_grid must be a non-empty, non-negative, strictly increasing 1-d grid")
    if np.max(np.abs(rho0 - rho0.conj().T)) > 1e-12:
        raise ParameterError("rho0 must be Hermitian")
    return rho0, times


def propagate_numeric(
    rho0: np.ndarray, spectrum: Spectrum, rates: RateTensor, t_grid: np.ndarray
) -> DensityTrajectory:
    """Integrate the full master equation with an adaptive 8th-order Runge-Kutta scheme."""
    rho0, times = _check_inputs(rho0, spectrum, rates, t_grid)
    n = spectrum.n_levels
    generator = rates.generator()

    def rhs(_t: float, y: np.ndarray) -> np.ndarray:
        return generator @ y

    solution = solve_ivp(
        rhs,
        (0.0, float(times[-1])),
        rho0.reshape(n * n),
        method="DOP853",
        t_eval=times,
        rtol=INTEGRATOR_RTOL,
        atol=INTEGRATOR_ATOL,
    )
    if not solution.success:
        raise NumericalError(f"master-equation integration failed: {solution.message}")

    raw = solution.y.T.reshape(times.size, n, n)
    adjoint = np.conj(np.transpose(raw, (0, 2, 1)))
    defect = float(np.max(np.abs(raw - adjoint)))
    trajectory = DensityTrajectory(
        times=times, states=0.5 * (raw + adjoint), solver="numeric", integrator_hermiticity=defect
    )
    logger.debug(
        "numeric propagation: %d rhs evaluations, trace deviation %.2e, hermiticity defect %.2e",
        solution.nfev,
        trajectory.trace_deviation(),
        defect,
    )
    trajectory.check_positivity()
    return trajectory


def simplified_population_matrix(rates: RateTensor) -> np.ndarray:
    """Population generator keeping only downward transfers between different doublets.

    Upward rates carry the small factor N + 1 of a negative frequency and are
    dropped, as are transfers inside a doublet (third order in g).
    """
    n = rates.n_levels
    m = np.zeros((n, n))
    for j in range(n):
        for k in range(j + 1, n):
            if j > 0 and doublet_of(j)[0] == doublet_of(k)[0]:
                continue
            m[j, k] = rates.values[j, j, k, k]
    m -= np.diag(m.sum(axis=0))
    return m


def _expm_populations(matrix: np.ndarray, sigma0: np.ndarray, times: np.ndarray) -> np.ndarray:
    return np.array([scipy.linalg.expm(math.pi * matrix * t) @ sigma0 for t in times])


def _closed_form_populations(matrix: np.ndarray, sigma0: np.ndarray, times: np.ndarray) -> np.ndarray | None:
    """Five-level upper-triangular solution; None when two rates coincide."""
    decay1 = -math.pi * matrix[1, 1]
    decay2 = -math.pi * matrix[2, 2]
    decay3 = -math.pi * matrix[3, 3]
    decay4 = -math.pi * matrix[4, 4]
    for fast, slow in ((decay1, decay3), (decay1, decay4), (decay2, decay3), (decay2, decay4)):
        if abs(fast - slow) < FSA_DENOMINATOR_TOL:
            return None

    s0, s1, s2, s3, s4 = sigma0
    e1, e2, e3, e4 = (np.exp(-rate * times) for rate in (decay1, decay2, decay3, decay4))
    sigma3 = s3 * e3
    sigma4 = s4 * e4

    def fed(level: int, own: np.ndarray, own_rate: float) -> np.ndarray:
        out = sigma0[level] * own
        out = out + math.pi * matrix[level, 3] * s3 * (e3 - own) / (own_rate - decay3)
        out = out + math.pi * matrix[level, 4] * s4 * (e4 - own) / (own_rate - decay4)
        return out

    sigma1 = fed(1, e1, decay1)
    sigma2 = fed(2, e2, decay2)
    sigma00 = (s0 + s1 + s2 + s3 + s4) - sigma1 - sigma2 - sigma3 - sigma4
    return np.stack([sigma00, sigma1, sigma2, sigma3, sigma4], axis=1)


def fsa_populations(rates: RateTensor, sigma0: np.ndarray, times: np.ndarray) -> np.ndarray:
    matrix = simplified_population_matrix(rates)
    sigma0 = np.real(np.asarray(sigma0))
    if rates.n_levels == 5:
        closed = _closed_form_populations(matrix, sigma0, times)
        if closed is not None:
            return closed
        logger.info("coincident FSA rates, falling back to the matrix exponential")
    return _expm_populations(matrix, sigma0, times)


def solve_fsa(
    rho0: np.ndarray, spectrum: Spectrum, rates: RateTensor, t_grid: np.ndarray
) -> DensityTrajectory:
    rho0, times = _check_inputs(rho0, spectrum, rates, t_grid)
    n = spectrum.n_levels
    idx = np.arange(n)
    dephasing = math.pi * rates.values[idx[:, None], idx[None, :], idx[:, None], idx[None, :]]
    exponent = dephasing - 1j * spectrum.omega
    states = rho0[None, :, :] * np.exp(exponent[None, :, :] * times[:, None, None])
    populations = fsa_populations(rates, np.diag(rho0), times)
    states[:, idx, idx] = populations
    return DensityTrajectory(times=times, states=states, solver="fsa")


# ---------------------------------------------------------------------------
# Partial secular approximation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairDephasing:
    """Coupled coherences rho_a, rho_b obeying d/dt (rho_a, rho_b) = generator @ (rho_a, rho_b)."""

    first: tuple[int, int]
    second: tuple[int, int]
    generator: np.ndarray
    lam_plus: complex
    lam_minus: complex
    r: complex
    v_plus: complex | None = None
    v_minus: complex | None = None
    c_plus: complex | None = None
    c_minus: complex | None = None

    @property
    def coupled(self) -> bool:
        return self.generator[0, 1] != 0 or self.generator[1, 0] != 0

    def propagator(self, t: float) -> np.ndarray:
        """exp(generator * t) by Sylvester's formula."""
        eye = np.eye(2)
        plus = (self.generator - self.lam_minus * eye) / self.r
        minus = (self.generator - self.lam_plus * eye) / self.r
        return cmath.exp(self.lam_plus * t) * plus - cmath.exp(self.lam_minus * t) * minus


@dataclass(frozen=True)
class DephasingSpec:
    pairs: tuple[PairDephasing, ...] = field(default_factory=tuple)

    def pair(self, first: tuple[int, int], second: tuple[int, int]) -> PairDephasing:
        for entry in self.pairs:
            if entry.first == first and entry.second == second:
                return entry
        raise KeyError((first, second))


def _pair_dephasing(
    rates: RateTensor,
    first: tuple[int, int],
    second: tuple[int, int],
    rho0: np.ndarray | None,
) -> PairDephasing:
    (n, m), (j, k) = first, second
    L = rates.values
    w = rates.omega
    generator = np.array(
        [
            [math.pi * L[n, m, n, m] - 1j * w[n, m], math.pi * L[n, m, j, k]],
            [math.pi * L[j, k, n, m], math.pi * L[j, k, j, k] - 1j * w[j, k]],
        ]
    )
    d = generator[0, 0] - generator[1, 1]
    r = cmath.sqrt(d**2 + 4 * generator[0, 1] * generator[1, 0])
    if abs(r) < PAIR_DEGENERACY_TOL:
        raise DegeneratePairError(f"coherence pair {first}/{second} has a defective generator (R = 0)")
    trace = generator[0, 0] + generator[1, 1]
    lam_plus, lam_minus = 0.5 * (trace + r), 0.5 * (trace - r)

    v_plus = v_minus = c_plus = c_minus = None
    coupling_back = generator[1, 0]
    if coupling_back != 0:
        v_plus = (d + r) / (2 * coupling_back)
        v_minus = (d - r) / (2 * coupling_back)
        if rho0 is not None:
            a0, b0 = rho0[n, m], rho0[j, k]
            c_plus = (2 * coupling_back * a0 - b0 * (d - r)) / (2 * r)
            c_minus = -(2 * coupling_back * a0 - b0 * (d + r)) / (2 * r)
    return PairDephasing(
        first=first,
        second=second,
        generator=generator,
        lam_plus=complex(lam_plus),
        lam_minus=complex(lam_minus),
        r=complex(r),
        v_plus=v_plus,
        v_minus=v_minus,
        c_plus=c_plus,
        c_minus=c_minus,
    )


def dephasing_spec(rates: RateTensor, rho0: np.ndarray | None = None) -> DephasingSpec:
    """Eigenvalues and amplitudes of the three coupled coherence pairs."""
    if rates.n_levels < 5:
        raise ParameterError("the partial secular approximation needs n_levels >= 5")
    rho = None if rho0 is None else np.asarray(rho0, dtype=complex)
    return DephasingSpec(pairs=tuple(_pair_dephasing(rates, a, b, rho) for a, b in PSA_PAIRS))


def psa_rate(spec: DephasingSpec) -> tuple[float, float]:
    """(Gamma_12^+, omega_12^+) of the ground-state coherence pair."""
    lam = spec.pair((0, 1), (0, 2)).lam_plus
    return -lam.real, abs(lam.imag)


def solve_psa(
    rho0: np.ndarray, spectrum: Spectrum, rates: RateTensor, t_grid: np.ndarray
) -> DensityTrajectory:
    rho0, times = _check_inputs(rho0, spectrum, rates, t_grid)
    spec = dephasing_spec(rates, rho0)
    states = solve_fsa(rho0, spectrum, rates, times).states.copy()
    for pair in spec.pairs:
        if not pair.coupled:
            continue
        (n, m), (j, k) = pair.first, pair.second
        start = np.array([rho0[n, m], rho0[j, k]])
        evolved = np.array([pair.propagator(float(t)) @ start for t in times])
        states[:, n, m] = evolved[:, 0]
        states[:, j, k] = evolved[:, 1]
        states[:, m, n] = np.conj(evolved[:, 0])
        states[:, k, j] = np.conj(evolved[:, 1])
    return DensityTrajectory(times=times, states=states, solver="psa")


# ---------------------------------------------------------------------------
# Relaxation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RelaxationSpec:
    gamma_r: float
    second: float
    matrix: np.ndarray
    numeric: tuple[float, float]
    detuned_estimate: float

    @property
    def closed_form_error(self) -> float:
        return max(abs(self.gamma_r - self.numeric[0]), abs(self.second - self.numeric[1]))


def relaxation_spec(rates: RateTensor, delta_b: float, omega: float) -> RelaxationSpec:
    """Two nonzero decay rates of the three lowest populations, all rates kept."""
    if rates.n_levels < 3:
        raise ParameterError("relaxation needs at least three levels")
    L = rates.values
    m = np.array([[L[a, a, b, b] for b in range(3)] for a in range(3)])
    np.fill_diagonal(m, 0.0)
    total = float(m.sum())
    np.fill_diagonal(m, -m.sum(axis=0))

    l0011, l0022, l1122 = L[0, 0, 1, 1], L[0, 0, 2, 2], L[1, 1, 2, 2]
    l1100, l2200, l2211 = L[1, 1, 0, 0], L[2, 2, 0, 0], L[2, 2, 1, 1]
    minors = (
        l0011 * l0022
        + l1100 * l0022
        + l0011 * l1122
        + l1100 * l1122
        + l0011 * l2200
        + l1122 * l2200
        + l2211 * l0022
        + l1100 * l2211
        + l2200 * l2211
    )
    root = math.sqrt(max(0.0, total**2 - 4 * minors))
    gamma_r = 0.5 * math.pi * (total - root)
    second = 0.5 * math.pi * (total + root)

    decay = np.sort(-np.real(np.linalg.eigvals(math.pi * m)))
    numeric = (float(decay[1]), float(decay[2]))
    detuned = math.pi * (l0022 if omega < delta_b else l0011)

    spec = RelaxationSpec(
        gamma_r=float(gamma_r),
        second=float(second),
        matrix=m,
        numeric=numeric,
        detuned_estimate=float(detuned),
    )
    if spec.closed_form_error > 1e-8 * max(1.0, second):
        logger.warning("relaxation closed form disagrees with eigensolver by %.3e", spec.closed_form_error)
    logger.debug("Gamma_r=%.6g second=%.6g", gamma_r, second)
    return spec


def relaxation_rate(params: SystemParams) -> RelaxationSpec:
    spectrum = eigenenergies(params, 3)
    rates = rate_tensor(spectrum, analytic_x(params, 3), params)
    return relaxation_spec(rates, derive(params).delta_b, params.omega)
