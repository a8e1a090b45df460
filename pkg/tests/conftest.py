from __future__ import annotations

import math

import numpy as np
import pytest

from tlsho.observables import prepare
from tlsho.params import SystemParams

G = 0.18
KAPPA = 0.0154
BETA = 10.0


@pytest.fixture(scope="session")
def unbiased_params() -> SystemParams:
    """epsilon = 0 with the oscillator on resonance with Delta0."""
    return SystemParams(epsilon=0.0, delta0=1.0, g=G, omega=1.0, kappa=KAPPA, beta=BETA)


@pytest.fixture(scope="session")
def biased_params() -> SystemParams:
    """epsilon = 0.5 with the oscillator on resonance with Delta_b."""
    return SystemParams(epsilon=0.5, delta0=1.0, g=G, omega=math.hypot(0.5, 1.0), kappa=KAPPA, beta=BETA)


@pytest.fixture(scope="session")
def unbiased_system(unbiased_params):
    return prepare(unbiased_params)


@pytest.fixture(scope="session")
def biased_system(biased_params):
    return prepare(biased_params)


@pytest.fixture
def t_grid() -> np.ndarray:
    return np.linspace(0.0, 100.0, 1001)
