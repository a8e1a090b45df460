"""Invariant suite run by ``tlsho validate``."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .config import DEFAULT_N_LEVELS, STATIONARY_GAP_TOL, default_j_max
from .coupling import analytic_x
from .jaynes_cummings import selection_allowed
from .observables import TimeSeries, population_dynamics, prepare
from .oracle import ProductBasis, align, build_hamiltonian, diagonalize, position_operator
from .params import SystemParams
from .redfield import (
    fsa_populations,
    propagate_numeric,
    simplified_population_matrix,
)
from .vanvleck import Spectrum, build_s_matrix, doublet_manifolds, eigenenergies, eigenstates, general_generator

logger = logging.getLogger(__name__)

EnergyFn = Callable[[SystemParams, int], Spectrum]

CONVERGENCE_RATIO = 6.0
COMPARED_LEVELS = 5
DISSIPATIVE_CHECKS = (
    "rate_identities",
    "relaxation_closed_form",
    "stationary_gap",
    "p_inf_consistency",
    "trace_conservation",
    "hermiticity",
    "fsa_closed_form",
    "fsa_vs_numeric",
    "psa_vs_numeric",
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # "pass", "fail" or "skip"
    value: float = float("nan")
    limit: float = float("nan")
    detail: str = ""

    @property
    def failed(self) -> bool:
        return self.status == "fail"


@dataclass
class ValidationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not any(check.failed for check in self.checks)

    def add(self, name: str, value: float, limit: float, detail: str = "", *, at_least: bool = False) -> None:
        ok = value >= limit if at_least else value <= limit
        if not math.isfinite(value):
            ok = False
        self.checks.append(CheckResult(name, "pass" if ok else "fail", float(value), float(limit), detail))
        if not ok:
            logger.warning("check %s failed: %.3e vs limit %.3e %s", name, value, limit, detail)

    def skip(self, name: str, reason: str) -> None:
        self.checks.append(CheckResult(name, "skip", detail=reason))


def _oracle_energies(params: SystemParams, n: int) -> np.ndarray:
    decomp = diagonalize(build_hamiltonian(params, default_j_max(n)))
    return decomp.energies[:n]


def _energy_error(params: SystemParams, energies: EnergyFn) -> float:
    approx = np.sort(energies(params, COMPARED_LEVELS).energies)
    return float(np.max(np.abs(approx - _oracle_energies(params, COMPARED_LEVELS))))


def check_spectrum(report: ValidationReport, params: SystemParams, energies: EnergyFn) -> None:
    if params.g == 0:
        report.add("spectrum_oracle", _energy_error(params, energies), 1e-12, "g = 0")
        report.skip("cubic_convergence", "g = 0")
        return
    report.add("spectrum_oracle", _energy_error(params, energies), 3 * params.g**3, "max |E_vv - E_oracle|, n < 5")

    errors = [_energy_error(params.replace(g=params.g / 2**k), energies) for k in range(3)]
    ratios = [errors[k] / errors[k + 1] if errors[k + 1] > 0 else math.inf for k in range(2)]
    report.add(
        "cubic_convergence",
        min(ratios),
        CONVERGENCE_RATIO,
        "error ratio when g halves: " + ", ".join(f"{r:.2f}" for r in ratios),
        at_least=True,
    )


def check_x_table(report: ValidationReport, params: SystemParams) -> None:
    n = COMPARED_LEVELS
    j_max = default_j_max(n)
    decomp = diagonalize(build_hamiltonian(params, j_max))
    table = eigenstates(params, n, j_max)
    aligned = align(decomp, table.vectors)
    numeric = aligned.vectors.T @ position_operator(ProductBasis(j_max)) @ aligned.vectors
    diff = float(np.max(np.abs(numeric - analytic_x(params, n))))
    report.add("x_table", diff, max(5 * params.g**3, 1e-10), "analytic vs oracle X over n, m < 5")


def check_generator(report: ValidationReport, params: SystemParams) -> None:
    j_max = default_j_max(COMPARED_LEVELS)
    h = build_hamiltonian(params, j_max).elements
    with np.errstate(divide="ignore", invalid="ignore"):
        first, _ = general_generator(np.diag(h), h - np.diag(np.diag(h)), doublet_manifolds(ProductBasis(j_max)))
    diff = float(np.max(np.abs(first - build_s_matrix(params, j_max).first_order)))
    report.add("generator_first_order", diff, 1e-12, "tabulated iS vs general formula")


def check_selection_rules(report: ValidationReport, params: SystemParams) -> None:
    system = prepare(params.replace(epsilon=0.0), n_levels=7, branch="jc")
    weights = system.coefficients
    forbidden = [
        abs(weights.off_diagonal[n, m])
        for n in range(7)
        for m in range(7)
        if n != m and not selection_allowed(n, m)
    ]
    report.add("jc_selection_rules", max(forbidden), 1e-12, "forbidden JC weights (n, m <= 6)")
    report.add("jc_diagonal_weights", float(np.max(np.abs(weights.diagonal))), 1e-12, "JC p_nn at epsilon = 0")


def check_free_start(report: ValidationReport, params: SystemParams) -> None:
    system = prepare(params, n_levels=DEFAULT_N_LEVELS)
    start = population_dynamics(system, "free", np.array([0.0, 1.0])).values[0]
    report.add("free_initial_value", abs(start - 1.0), 0.05 + 3 * params.g**2, "|P(0) - 1|")
    if params.epsilon == 0:
        coeffs = system.coefficients
        report.add("unbiased_p0_p_inf", max(abs(coeffs.p0), abs(coeffs.p_inf)), 1e-12, "epsilon = 0")


def check_dissipative(report: ValidationReport, params: SystemParams) -> None:
    system = prepare(params, n_levels=DEFAULT_N_LEVELS)
    residuals = system.rates.identity_residuals()
    report.add("rate_identities", max(residuals.values()), 1e-12, ", ".join(f"{k}={v:.1e}" for k, v in residuals.items()))

    relax = system.relaxation()
    report.add("relaxation_closed_form", relax.closed_form_error, 1e-10, f"Gamma_r={relax.gamma_r:.6g}")

    report.add("stationary_gap", system.stationary_gap(), STATIONARY_GAP_TOL, "|p_inf| rate-tensor kernel vs Boltzmann")
    t_end = 30.0 / relax.gamma_r
    settled = population_dynamics(system, "numeric", np.array([0.0, t_end])).values[-1]
    report.add(
        "p_inf_consistency",
        abs(settled - system.coefficients.p_inf),
        STATIONARY_GAP_TOL,
        f"|P(t) - p_inf| at t = 30/Gamma_r = {t_end:.0f}",
    )

    times = np.linspace(0.0, 200.0, 801)
    trajectory = propagate_numeric(system.rho0, system.spectrum, system.rates, times)
    report.add("trace_conservation", trajectory.trace_deviation(), 1e-8, "numeric solver, t <= 200")
    report.add("hermiticity", trajectory.integrator_hermiticity, 1e-10, "numeric solver, raw output, t <= 200")

    sigma0 = np.real(np.diag(system.rho0))
    closed = fsa_populations(system.rates, sigma0, times)
    matrix = simplified_population_matrix(system.rates)
    reference = np.array([scipy.linalg.expm(math.pi * matrix * t) @ sigma0 for t in times])
    report.add("fsa_closed_form", float(np.max(np.abs(closed - reference))), 1e-9, "closed form vs matrix exponential")

    grid = np.linspace(0.0, 100.0, 1001)
    numeric = population_dynamics(system, "numeric", grid).values
    fsa = population_dynamics(system, "fsa", grid).values
    psa = population_dynamics(system, "psa", grid).values
    report.add("fsa_vs_numeric", float(np.max(np.abs(fsa - numeric))), 0.05, "max_t |P_fsa - P_numeric|")
    report.add("psa_vs_numeric", float(np.max(np.abs(psa - numeric))), 0.03, "max_t |P_psa - P_numeric|")


def check_free_consistency(report: ValidationReport, params: SystemParams) -> None:
    system = prepare(params, n_levels=DEFAULT_N_LEVELS)
    grid = np.linspace(0.0, 100.0, 501)
    numeric = population_dynamics(system, "numeric", grid)
    free = population_dynamics(system, "free", grid)
    report.add("free_vs_numeric", _max_diff(numeric, free), 1e-8, "kappa = 0")


def _max_diff(a: TimeSeries, b: TimeSeries) -> float:
    return float(np.max(np.abs(a.values - b.values)))


def run_checks(params: SystemParams, *, energies: EnergyFn = eigenenergies) -> ValidationReport:
    """Run every applicable check; ``energies`` replaces the Van-Vleck spectrum under test."""
    report = ValidationReport()
    check_spectrum(report, params, energies)
    check_x_table(report, params)
    check_generator(report, params)
    check_selection_rules(report, params)
    check_free_start(report, params)
    if params.kappa > 0:
        check_dissipative(report, params)
    else:
        for name in DISSIPATIVE_CHECKS:
            report.skip(name, "kappa = 0")
        check_free_consistency(report, params)
    logger.info(
        "validation: %d passed, %d failed, %d skipped",
        sum(c.status == "pass" for c in report.checks),
        sum(c.failed for c in report.checks),
        sum(c.status == "skip" for c in report.checks),
    )
    return report


__all__ = ["CheckResult", "ValidationReport", "run_checks"]
