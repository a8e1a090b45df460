"""Concurrent evaluation of independent sweep points."""

from __future__ import annotations

import asyncio
import logging
from collections.abc import Callable, Sequence
from typing import TypeVar

import numpy as np

from .runconfig import SweepSpec

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def sweep_values(spec: SweepSpec) -> np.ndarray:
    return np.linspace(spec.start, spec.stop, spec.count)


async def _evaluate(
    index: int,
    point: T,
    fn: Callable[[T], R],
    semaphore: asyncio.Semaphore,
) -> R:
    async with semaphore:
        logger.debug("sweep point %d: %r", index, point)
        return await asyncio.to_thread(fn, point)


async def _gather(points: Sequence[T], fn: Callable[[T], R], workers: int) -> list[R]:
    semaphore = asyncio.Semaphore(workers)
    tasks = [asyncio.create_task(_evaluate(i, point, fn, semaphore)) for i, point in enumerate(points)]
    return list(await asyncio.gather(*tasks))


def run_sweep(points: Sequence[T], fn: Callable[[T], R], workers: int = 1) -> list[R]:
    """Evaluate ``fn`` on every point; results come back in point order.

    The first exception raised by any point propagates.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if workers == 1 or len(points) <= 1:
        return [fn(point) for point in points]
    return asyncio.run(_gather(points, fn, workers))
