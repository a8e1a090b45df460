"""Run configuration: a flat key-value document plus CLI overrides."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml

from .config import DEFAULT_J_CUT, DEFAULT_N_LEVELS, DEFAULT_WORKERS, PEAK_WIDTH
from .errors import ConfigError, ParameterError
from .observables import SOLVERS, branch_of
from .params import SystemParams

logger = logging.getLogger(__name__)

PARAM_FIELDS = ("epsilon", "delta0", "g", "omega", "kappa", "beta")
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class SweepSpec:
    param: str
    start: float
    stop: float
    count: int

    def as_text(self) -> str:
        return f"{self.param}:{self.start!r}:{self.stop!r}:{self.count}"


@dataclass(frozen=True)
class RunConfig:
    epsilon: float = 0.0
    delta0: float = 1.0
    g: float = 0.18
    omega: float = 1.0
    kappa: float = 0.0154
    beta: float = 10.0
    solver: str = "numeric"
    n_levels: int = DEFAULT_N_LEVELS
    j_max: int | None = None
    j_cut: int = DEFAULT_J_CUT
    t_max: float | None = None
    t_points: int = 2001
    omega_max: float = 3.0
    omega_points: int = 1201
    sweep: SweepSpec | None = None
    format: str = "csv"
    workers: int = DEFAULT_WORKERS
    peak_width: float = PEAK_WIDTH

    @property
    def solvers(self) -> tuple[str, ...]:
        """The solver field may list several comma-separated solvers."""
        return tuple(name.strip() for name in self.solver.split(",") if name.strip())

    def params(self) -> SystemParams:
        return SystemParams(**{name: getattr(self, name) for name in PARAM_FIELDS})

    def as_dict(self) -> dict[str, Any]:
        data = dataclasses.asdict(self)
        data["sweep"] = None if self.sweep is None else self.sweep.as_text()
        return data


_FLOAT_KEYS = {"epsilon", "delta0", "g", "omega", "kappa", "beta", "t_max", "omega_max", "peak_width"}
_INT_KEYS = {"n_levels", "j_cut", "t_points", "omega_points", "workers"}
_KNOWN_KEYS = {field.name for field in dataclasses.fields(RunConfig)}


def parse_sweep(text: str) -> SweepSpec:
    """``"omega:0.5:1.5:101"`` -> SweepSpec."""
    parts = str(text).split(":")
    if len(parts) != 4:
        raise ConfigError(f"sweep must be PARAM:START:STOP:COUNT, got {text!r}")
    param, start, stop, count = parts
    param = param.strip()
    if param not in PARAM_FIELDS:
        raise ConfigError(f"cannot sweep {param!r}; sweepable: {', '.join(PARAM_FIELDS)}")
    return SweepSpec(
        param=param,
        start=_safe_float(start, "sweep start"),
        stop=_safe_float(stop, "sweep stop"),
        count=_safe_int(count, "sweep count"),
    )


def _safe_float(value: Any, name: str) -> float:
    if isinstance(value, bool):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number, got {value!r}") from None


def _safe_int(value: Any, name: str) -> int:
    if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be an integer, got {value!r}") from None


def _normalize(raw: Mapping[str, Any]) -> dict[str, Any]:
    unknown = sorted(set(raw) - _KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    normalized: dict[str, Any] = {}
    for key, value in raw.items():
        if value is None:
            continue
        if key in _FLOAT_KEYS:
            normalized[key] = _safe_float(value, key)
        elif key in _INT_KEYS:
            normalized[key] = _safe_int(value, key)
        elif key == "j_max":
            normalized[key] = _safe_int(value, key)
        elif key == "sweep":
            if isinstance(value, Mapping):
                text = f"{value.get('param')}:{value.get('start')}:{value.get('stop')}:{value.get('count')}"
                normalized[key] = parse_sweep(text)
            elif isinstance(value, SweepSpec):
                normalized[key] = value
            else:
                normalized[key] = parse_sweep(value)
        else:
            normalized[key] = str(value)
    return normalized


def load_config(path: Path | str) -> RunConfig:
    """Read a flat JSON or YAML mapping into a RunConfig."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid JSON/YAML: {exc}") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path} must be a flat mapping, got {type(raw).__name__}")
    logger.debug("loaded %d config keys from %s", len(raw), path)
    return RunConfig(**_normalize(raw))


def merge_overrides(config: RunConfig, overrides: Mapping[str, Any]) -> RunConfig:
    """Apply flag values; ``None`` means the flag was not given."""
    changes = _normalize({key: value for key, value in overrides.items() if value is not None})
    return dataclasses.replace(config, **changes)


def validate_config(config: RunConfig) -> RunConfig:
    try:
        config.params()
    except ParameterError as exc:
        raise ConfigError(str(exc)) from exc

    if not config.solvers:
        raise ConfigError("at least one solver is required")
    branches = set()
    for name in config.solvers:
        if name not in SOLVERS:
            raise ConfigError(f"unknown solver {name!r}; expected one of {', '.join(SOLVERS)}")
        branches.add(branch_of(name))
    if config.format not in FORMATS:
        raise ConfigError(f"format must be one of {', '.join(FORMATS)}, got {config.format!r}")
    if (config.t_max is not None and config.t_max <= 0) or config.t_points < 2:
        raise ConfigError("time grid needs t_max > 0 and t_points >= 2")
    if config.omega_max <= 0 or config.omega_points < 2:
        raise ConfigError("frequency grid needs omega_max > 0 and omega_points >= 2")
    if config.n_levels < 3:
        raise ConfigError(f"n_levels must be >= 3, got {config.n_levels}")
    if "psa" in config.solvers and config.n_levels < 5:
        raise ConfigError("the psa solver needs n_levels >= 5")
    if config.j_max is not None and config.j_max < 1:
        raise ConfigError(f"j_max must be >= 1, got {config.j_max}")
    if config.j_cut < 0:
        raise ConfigError(f"j_cut must be >= 0, got {config.j_cut}")
    if config.workers < 1:
        raise ConfigError(f"workers must be >= 1, got {config.workers}")
    if config.peak_width <= 0:
        raise ConfigError("peak_width must be positive")

    sweep = config.sweep
    if sweep is not None:
        if sweep.count < 1:
            raise ConfigError("sweep count must be >= 1")
        if sweep.count > 1 and not sweep.start < sweep.stop:
            raise ConfigError(f"sweep bounds must be ordered, got {sweep.start} .. {sweep.stop}")
        for value in (sweep.start, sweep.stop):
            try:
                dataclasses.replace(config.params(), **{sweep.param: value})
            except ParameterError as exc:
                raise ConfigError(f"sweep endpoint invalid: {exc}") from exc

    if "jc" in branches:
        if config.epsilon != 0:
            raise ConfigError("jc-* solvers require epsilon = 0")
        if sweep is not None and sweep.param == "epsilon":
            raise ConfigError("jc-* solvers cannot sweep epsilon")
    return config


def config_hash(config: RunConfig) -> str:
    """Short SHA-256 of the canonical config; the worker count does not affect output."""
    data = config.as_dict()
    data.pop("workers", None)
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]
