"""Closed-form matrix elements X_nm = <n|(B + B^dagger)|m> in the dressed eigenbasis."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .params import SystemParams, derive
from .vanvleck import check_resonance_guard, effective_coefficients

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CouplingFactors:
    l0: float
    losc: float
    lq: float
    lq_osc_plus: float
    lq_osc_minus: float


def coupling_factors(params: SystemParams) -> CouplingFactors:
    check_resonance_guard(params)
    delta_b = derive(params).delta_b
    eps, d0, g, big_omega = params.epsilon, params.delta0, params.g, params.omega
    if eps == 0:
        minus = 0.0
    else:
        minus = -4 * eps * d0 * g**2 / (delta_b**2 * big_omega * (delta_b - 2 * big_omega))
    return CouplingFactors(
        l0=eps * g / (delta_b * big_omega),
        losc=(2 * delta_b + 3 * big_omega) * d0**2 * g**2 / (delta_b**2 * big_omega * (delta_b + big_omega) ** 2),
        lq=d0 * g / (delta_b * (delta_b + big_omega)),
        lq_osc_plus=4 * eps * d0 * g**2 / (delta_b**2 * (delta_b + big_omega) * (delta_b + 2 * big_omega)),
        lq_osc_minus=minus,
    )


def analytic_x(params: SystemParams, n_levels: int) -> np.ndarray:
    """Symmetric X table with the sparsity pattern of the second-order eigenstates."""
    factors = coupling_factors(params)
    vv = effective_coefficients(params)
    l0, losc, lq = factors.l0, factors.losc, factors.lq
    plus, minus = factors.lq_osc_plus, factors.lq_osc_minus

    x = np.zeros((n_levels, n_levels))

    def put(n: int, m: int, value: float) -> None:
        if n < n_levels and m < n_levels:
            x[n, m] = value
            x[m, n] = value

    alphas = [vv.alpha_j(j) for j in range(n_levels // 2 + 3)]
    cos_half = [math.cos(a / 2) for a in alphas]
    sin_half = [math.sin(a / 2) for a in alphas]

    put(0, 0, -2 * l0)
    put(0, 1, sin_half[0] * lq + cos_half[0] * (1 + losc))
    put(0, 2, cos_half[0] * lq - sin_half[0] * (1 + losc))
    put(0, 3, sin_half[1] * plus)
    put(0, 4, cos_half[1] * plus)

    for j in range((n_levels - 1) // 2 + 1):
        lower, upper = 2 * j + 1, 2 * j + 2
        if lower >= n_levels:
            break
        a = alphas[j]
        c0, s0 = cos_half[j], sin_half[j]
        c1, s1 = cos_half[j + 1], sin_half[j + 1]
        c2, s2 = cos_half[j + 2], sin_half[j + 2]
        up = math.sqrt(j + 2) * (1 + losc)
        down = math.sqrt(j + 1) * (1 - losc)

        put(lower, lower, -2 * l0 * math.cos(a) + math.sqrt(j + 1) * minus * math.sin(a))
        put(lower, upper, 2 * l0 * math.sin(a) + math.sqrt(j + 1) * minus * math.cos(a))
        put(lower, 2 * j + 3, lq * c0 * s1 + up * c0 * c1 + down * s0 * s1)
        put(lower, 2 * j + 4, lq * c0 * c1 - up * c0 * s1 + down * s0 * c1)
        put(lower, 2 * j + 5, math.sqrt(j + 2) * plus * c0 * s2)
        put(lower, 2 * j + 6, math.sqrt(j + 2) * plus * c0 * c2)

        put(upper, upper, 2 * l0 * math.cos(a) - math.sqrt(j + 1) * minus * math.sin(a))
        put(upper, 2 * j + 3, -lq * s0 * s1 - up * s0 * c1 + down * c0 * s1)
        put(upper, 2 * j + 4, -lq * s0 * c1 + up * s0 * s1 + down * c0 * c1)
        put(upper, 2 * j + 5, -math.sqrt(j + 2) * plus * s0 * s2)
        put(upper, 2 * j + 6, -math.sqrt(j + 2) * plus * s0 * c2)
    return x
