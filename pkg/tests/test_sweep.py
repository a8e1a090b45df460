from __future__ import annotations

import time

import numpy as np
import pytest

from tlsho.runconfig import SweepSpec
from tlsho.sweep import run_sweep, sweep_values


def test_sweep_values_include_both_ends():
    values = sweep_values(SweepSpec("omega", 0.5, 1.5, 11))
    assert len(values) == 11
    assert values[0] == 0.5
    assert values[-1] == 1.5
    np.testing.assert_allclose(np.diff(values), 0.1)


def test_single_point_sweep():
    assert sweep_values(SweepSpec("g", 0.1, 0.1, 1)).tolist() == [0.1]


def _slow_square(x):
    # later points finish first
    time.sleep(0.002 * (5 - x))
    return x * x


def test_concurrent_results_keep_point_order():
    points = list(range(6))
    assert run_sweep(points, _slow_square, workers=4) == run_sweep(points, _slow_square, workers=1)
    assert run_sweep(points, _slow_square, workers=4) == [x * x for x in points]


def test_exceptions_propagate():
    def boom(x):
        if x == 2:
            raise RuntimeError("point 2")
        return x

    with pytest.raises(RuntimeError, match="point 2"):
        run_sweep([0, 1, 2, 3], boom, workers=3)


def test_workers_must_be_positive():
    with pytest.raises(ValueError):
        run_sweep([1], lambda x: x, workers=0)


def test_empty_sweep():
    assert run_sweep([], lambda x: x, workers=4) == []
