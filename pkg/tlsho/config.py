"""Central configuration for tlsho.

Configuration is controlled through environment variables with sensible defaults.
All physical quantities are in units where hbar = 1 and Delta0 = 1.
"""

from __future__ import annotations

import os


def _float_from_env(env_var: str, default: float) -> float:
    """Resolve a float from environment, falling back to default on parse errors."""
    raw = os.getenv(env_var)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError:
        return default


def _int_from_env(env_var: str, default: int) -> int:
    """Resolve an int from environment, falling back to default on parse errors."""
    raw = os.getenv(env_var)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        return default


LOG_LEVEL = os.getenv("TLSHO_LOG_LEVEL", "INFO").upper()
DEFAULT_WORKERS = _int_from_env("TLSHO_WORKERS", 4)

# Below this |omega| the G(omega)N(omega) product is replaced by kappa/beta.
OMEGA_ZERO_THRESHOLD = _float_from_env("TLSHO_OMEGA_ZERO", 1e-8)
# |Delta_b - 2 Omega| below this makes second-order Van-Vleck invalid.
DEGENERACY_TOL = _float_from_env("TLSHO_DEGENERACY_TOL", 1e-6)

INTEGRATOR_RTOL = _float_from_env("TLSHO_RTOL", 1e-10)
INTEGRATOR_ATOL = _float_from_env("TLSHO_ATOL", 1e-12)
PEAK_WIDTH = _float_from_env("TLSHO_PEAK_WIDTH", 0.01)

DEFAULT_N_LEVELS = 5
DEFAULT_J_MAX = 10
DEFAULT_J_CUT = 1
DEFAULT_T_MAX = 200.0
# e-folds of the slowest weighted decay spanned by an automatic time window.
WINDOW_E_FOLDS = 6.0
# Tolerated |p_inf| gap between the Boltzmann and the rate-tensor stationary populations.
STATIONARY_GAP_TOL = 1e-2
FSA_DENOMINATOR_TOL = 1e-10
POSITIVITY_FLOOR = -1e-6


def default_j_max(n_levels: int) -> int:
    """Smallest oracle/eigenstate truncation that keeps edge effects away from n_levels."""
    return max(DEFAULT_J_MAX, n_levels // 2 + 6)
