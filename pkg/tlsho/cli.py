"""tlsho CLI -- spectra, dynamics, Fourier spectra, rates, correlation maps and validation."""

from __future__ import annotations

import argparse
import dataclasses
import logging
import math
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .config import DEFAULT_T_MAX, LOG_LEVEL, default_j_max
from .emit import Table, emit
from .errors import ConfigError, NumericalError, ParameterError, TlshoError
from .observables import (
    DissipativeSystem,
    SpectrumSeries,
    branch_of,
    numeric_fourier,
    population_dynamics,
    prepare,
    spectrum_of_free,
    spectrum_of_longtime,
    symmetrized_correlation,
)
from .oracle import build_hamiltonian, diagonalize
from .params import SystemParams
from .redfield import dephasing_spec, psa_rate
from .runconfig import (
    RunConfig,
    config_hash,
    load_config,
    merge_overrides,
    parse_sweep,
    validate_config,
)
from .sweep import run_sweep, sweep_values
from .validate import run_checks
from .vanvleck import check_resonance_guard, eigenenergies

logger = logging.getLogger("tlsho")

DEFAULT_SWEEPS = {
    "spectrum": "omega:0.5:1.5:101",
    "rates": "omega:0.5:1.5:101",
    "correlation": "epsilon:-1.5:1.5:61",
}

OVERRIDE_FLAGS = (
    "epsilon",
    "delta0",
    "g",
    "omega",
    "kappa",
    "beta",
    "solver",
    "n_levels",
    "j_max",
    "j_cut",
    "t_max",
    "t_points",
    "omega_max",
    "omega_points",
    "sweep",
    "format",
    "workers",
    "peak_width",
)


def _setup_logging() -> None:
    logging.basicConfig(
        level=getattr(logging, LOG_LEVEL, logging.INFO),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


@dataclass(frozen=True)
class CommandResult:
    table: Table
    peaks: Table | None = None
    exit_code: int = 0


@dataclass(frozen=True)
class SweepPoint:
    index: int
    value: float | None
    params: SystemParams


def _load(args: argparse.Namespace, command: str) -> RunConfig:
    config = load_config(args.config) if args.config else RunConfig()
    config = merge_overrides(config, {name: getattr(args, name, None) for name in OVERRIDE_FLAGS})
    if config.sweep is None and command in DEFAULT_SWEEPS:
        config = dataclasses.replace(config, sweep=parse_sweep(DEFAULT_SWEEPS[command]))
    return validate_config(config)


def _points(config: RunConfig) -> list[SweepPoint]:
    params = config.params()
    if config.sweep is None:
        return [SweepPoint(0, None, params)]
    return [
        SweepPoint(i, float(value), params.replace(**{config.sweep.param: float(value)}))
        for i, value in enumerate(sweep_values(config.sweep))
    ]


def _at_point(config: RunConfig, fn: Callable[[SweepPoint], Any]) -> Callable[[SweepPoint], Any]:
    """Tag numerical failures with the sweep point that raised them."""

    def wrapped(point: SweepPoint) -> Any:
        try:
            return fn(point)
        except NumericalError as exc:
            if point.value is None or config.sweep is None:
                raise
            raise type(exc)(f"sweep point {point.index} ({config.sweep.param}={point.value:g}): {exc}") from exc

    return wrapped


def _evaluate(config: RunConfig, fn: Callable[[SweepPoint], Any]) -> list[tuple[SweepPoint, Any]]:
    points = _points(config)
    results = run_sweep(points, _at_point(config, fn), config.workers)
    return list(zip(points, results))


def _lead(config: RunConfig, point: SweepPoint) -> tuple[Any, ...]:
    return () if config.sweep is None else (point.value,)


def _lead_columns(config: RunConfig) -> tuple[str, ...]:
    return () if config.sweep is None else (config.sweep.param,)


def _time_grid(config: RunConfig, system: DissipativeSystem | None = None) -> np.ndarray:
    """Explicit t_max, or a window long enough for ``system`` to decay at the default sampling step."""
    if config.t_max is not None:
        return np.linspace(0.0, config.t_max, config.t_points)
    span = DEFAULT_T_MAX
    if system is not None and system.params.kappa > 0:
        span = max(span, system.decay_time())
    step = DEFAULT_T_MAX / (config.t_points - 1)
    return np.linspace(0.0, span, math.ceil(span / step - 1e-9) + 1)


def _omega_grid(config: RunConfig) -> np.ndarray:
    return np.linspace(0.0, config.omega_max, config.omega_points)


def _systems(config: RunConfig, params: SystemParams) -> dict[str, DissipativeSystem]:
    branches = sorted({branch_of(name) for name in config.solvers})
    return {
        branch: prepare(params, n_levels=config.n_levels, j_max=config.j_max, j_cut=config.j_cut, branch=branch)
        for branch in branches
    }


def _metadata(config: RunConfig, command: str) -> dict[str, Any]:
    return {"command": command, "config": config.as_dict()}


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def spectrum_table(config: RunConfig) -> CommandResult:
    n = config.n_levels
    j_max = config.j_max or default_j_max(n)

    def point(p: SweepPoint) -> tuple[np.ndarray, np.ndarray]:
        check_resonance_guard(p.params)
        vv = eigenenergies(p.params, n).energies
        oracle = diagonalize(build_hamiltonian(p.params, j_max)).energies[:n]
        return vv, oracle

    columns = (
        _lead_columns(config)
        + tuple(f"vv_E{i}" for i in range(n))
        + tuple(f"oracle_E{i}" for i in range(n))
        + ("max_abs_diff",)
    )
    rows = []
    for p, (vv, oracle) in _evaluate(config, point):
        diff = float(np.max(np.abs(np.sort(vv) - oracle)))
        rows.append(_lead(config, p) + tuple(vv) + tuple(oracle) + (diff,))
    return CommandResult(Table(columns, rows, _metadata(config, "spectrum")))


def dynamics_table(config: RunConfig) -> CommandResult:
    times = _time_grid(config)

    def point(p: SweepPoint) -> list[np.ndarray]:
        systems = _systems(config, p.params)
        return [population_dynamics(systems[branch_of(s)], s, times).values for s in config.solvers]

    columns = _lead_columns(config) + ("t",) + tuple(f"P_{s}" for s in config.solvers)
    rows = []
    for p, curves in _evaluate(config, point):
        lead = _lead(config, p)
        rows.extend(lead + (t,) + tuple(curve[i] for curve in curves) for i, t in enumerate(times))
    return CommandResult(Table(columns, rows, _metadata(config, "dynamics")))


def _fourier_of(config: RunConfig, system: DissipativeSystem, solver: str, grid: np.ndarray) -> SpectrumSeries:
    if solver in ("free", "jc-free"):
        return spectrum_of_free(system, grid)
    if solver == "longtime":
        return spectrum_of_longtime(system, grid)
    times = _time_grid(config, system)
    logger.debug("%s Fourier window: t <= %.0f, %d samples", solver, times[-1], times.size)
    return numeric_fourier(population_dynamics(system, solver, times), grid)


def fourier_table(config: RunConfig) -> CommandResult:
    grid = _omega_grid(config)

    def point(p: SweepPoint) -> list[SpectrumSeries]:
        systems = _systems(config, p.params)
        return [_fourier_of(config, systems[branch_of(s)], s, grid) for s in config.solvers]

    columns = (
        _lead_columns(config)
        + ("omega",)
        + tuple(f"F_{s}" for s in config.solvers)
        + tuple(f"F_{s}_broadened" for s in config.solvers)
    )
    peak_columns = _lead_columns(config) + ("solver", "position", "weight")
    rows, peak_rows = [], []
    for p, spectra in _evaluate(config, point):
        lead = _lead(config, p)
        broadened = [s.render(config.peak_width) for s in spectra]
        rows.extend(
            lead + (w,) + tuple(s.values[i] for s in spectra) + tuple(b[i] for b in broadened)
            for i, w in enumerate(grid)
        )
        for solver, series in zip(config.solvers, spectra):
            peak_rows.extend(lead + (solver, position, weight) for position, weight in series.peaks)
    meta = _metadata(config, "fourier")
    return CommandResult(Table(columns, rows, meta), Table(peak_columns, peak_rows, meta))


def rates_table(config: RunConfig) -> CommandResult:
    n_levels = max(5, config.n_levels)

    def point(p: SweepPoint) -> tuple[float, ...]:
        system = prepare(p.params, n_levels=n_levels, j_max=config.j_max, j_cut=config.j_cut)
        relax = system.relaxation()
        spec = dephasing_spec(system.rates)
        pair = spec.pair((0, 1), (0, 2))
        gamma_12, omega_12 = psa_rate(spec)
        gamma = system.gamma
        return (
            relax.gamma_r,
            relax.second,
            float(gamma[0, 1]),
            float(gamma[0, 2]),
            pair.lam_plus.real,
            pair.lam_minus.real,
            gamma_12,
            omega_12,
        )

    columns = _lead_columns(config) + (
        "gamma_r",
        "second",
        "gamma_01",
        "gamma_02",
        "re_lambda_plus",
        "re_lambda_minus",
        "gamma_12_plus",
        "omega_12_plus",
    )
    rows = [_lead(config, p) + values for p, values in _evaluate(config, point)]
    return CommandResult(Table(columns, rows, _metadata(config, "rates")))


def correlation_table(config: RunConfig) -> CommandResult:
    if config.kappa <= 0:
        raise ConfigError("correlation needs kappa > 0: without damping there is no stationary spectrum")
    if config.sweep is None or config.sweep.param != "epsilon":
        raise ConfigError("correlation sweeps epsilon; use --sweep epsilon:START:STOP:COUNT")
    solver = config.solvers[0]
    if solver in ("free", "jc-free"):
        raise ConfigError(f"solver {solver!r} has no stationary state; pick a dissipative solver")
    grid = _omega_grid(config)

    def point(p: SweepPoint) -> np.ndarray:
        times = _time_grid(config)
        if config.t_max is None:
            plus = p.params.replace(epsilon=abs(p.params.epsilon))
            system = prepare(plus, n_levels=config.n_levels, j_cut=config.j_cut, branch=branch_of(solver))
            times = _time_grid(config, system)
        result = symmetrized_correlation(
            p.params, times, grid, solver=solver, n_levels=config.n_levels, j_cut=config.j_cut
        )
        return result.spectrum.values

    rows = []
    for p, values in _evaluate(config, point):
        rows.extend((p.value, w, s) for w, s in zip(grid, values))
    return CommandResult(Table(("epsilon", "omega", "S"), rows, _metadata(config, "correlation")))


def validate_table(config: RunConfig) -> CommandResult:
    if config.sweep is not None:
        logger.warning("validate runs at the base parameters; ignoring sweep %s", config.sweep.as_text())
    report = run_checks(config.params())
    rows = [(c.name, c.status, c.value, c.limit, c.detail) for c in report.checks]
    table = Table(("check", "status", "value", "limit", "detail"), rows, _metadata(config, "validate"))
    return CommandResult(table, exit_code=0 if report.passed else 1)


def _execute(args: argparse.Namespace, command: str, build: Callable[[RunConfig], CommandResult]) -> int:
    try:
        config = _load(args, command)
        result = build(config)
        out = Path(args.out) if args.out else None
        emit(result.table, config.format, config_hash(config), out, result.peaks)
        return result.exit_code
    except (ConfigError, ParameterError) as exc:
        print(f"Config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"Numerical failure: {exc}", file=sys.stderr)
        return 3
    except TlshoError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"Output error: {exc}", file=sys.stderr)
        return 1


def cmd_spectrum(args: argparse.Namespace) -> int:
    """Van-Vleck and oracle eigenenergies over a parameter sweep."""
    return _execute(args, "spectrum", spectrum_table)


def cmd_dynamics(args: argparse.Namespace) -> int:
    """P(t) for each configured solver."""
    return _execute(args, "dynamics", dynamics_table)


def cmd_fourier(args: argparse.Namespace) -> int:
    """F(omega) for each configured solver, delta peaks in a sidecar."""
    return _execute(args, "fourier", fourier_table)


def cmd_rates(args: argparse.Namespace) -> int:
    """Relaxation and dephasing rates over a parameter sweep."""
    return _execute(args, "rates", rates_table)


def cmd_correlation(args: argparse.Namespace) -> int:
    """S(omega) of the symmetrized correlation over an epsilon sweep."""
    return _execute(args, "correlation", correlation_table)


def cmd_validate(args: argparse.Namespace) -> int:
    """Invariant suite; exit 1 when any check fails."""
    return _execute(args, "validate", validate_table)


COMMANDS = {
    "spectrum": (cmd_spectrum, "Eigenenergies E0..E4, Van-Vleck and oracle"),
    "dynamics": (cmd_dynamics, "Population difference P(t)"),
    "fourier": (cmd_fourier, "Fourier spectrum F(omega) plus peaks sidecar"),
    "rates": (cmd_rates, "Relaxation rate and dephasing rates"),
    "correlation": (cmd_correlation, "Symmetrized correlation spectrum S(omega) over epsilon"),
    "validate": (cmd_validate, "Run the invariant suite"),
}


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="Flat JSON/YAML run configuration")
    common.add_argument("--out", default=None, help="Output file (default: stdout)")
    common.add_argument("--format", default=None, help="csv or json (default: csv)")
    common.add_argument("--solver", default=None, help="Solver name, or a comma-separated list")
    common.add_argument("--workers", type=int, default=None, help="Concurrent sweep points")
    common.add_argument("--sweep", default=None, help="PARAM:START:STOP:COUNT")
    for name in ("epsilon", "delta0", "g", "omega", "kappa", "beta"):
        common.add_argument(f"--{name}", type=float, default=None)
    common.add_argument("--t-max", dest="t_max", type=float, default=None)
    common.add_argument("--t-points", dest="t_points", type=int, default=None)
    common.add_argument("--omega-max", dest="omega_max", type=float, default=None)
    common.add_argument("--omega-points", dest="omega_points", type=int, default=None)
    common.add_argument("--n-levels", dest="n_levels", type=int, default=None)
    common.add_argument("--j-max", dest="j_max", type=int, default=None)
    common.add_argument("--j-cut", dest="j_cut", type=int, default=None)
    common.add_argument("--peak-width", dest="peak_width", type=float, default=None)
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tlsho", description="Biased qubit coupled to a damped oscillator")
    sub = parser.add_subparsers(dest="command")
    common = _common_parser()
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command not in COMMANDS:
        parser.print_help()
        return 1
    handler, _ = COMMANDS[args.command]
    return handler(args)


def main(argv: Sequence[str] | None = None) -> None:
    """CLI entry point."""
    _setup_logging()
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
