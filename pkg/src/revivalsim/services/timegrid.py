"""Time grids and chunked evaluation of time series."""

from __future__ import annotations

import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray

from ..config import config
from ..constants import SAMPLES_PER_PERIOD
from ..exceptions import ParameterError

__all__ = ["evaluate_in_chunks", "time_grid", "validate_times"]

ChunkFunction = Callable[
    [NDArray[np.float64]], tuple[NDArray[np.float64], NDArray[np.float64]]
]
"""Maps a block of times to the matching ⟨x⟩ and ⟨p⟩ values."""


def time_grid(
    t_end: float,
    *,
    samples: int | None = None,
    samples_per_period: int = SAMPLES_PER_PERIOD,
) -> NDArray[np.float64]:
    """Evenly spaced times on [0, t_end].

    Without an explicit sample count the grid resolves the classical period
    2π with ``samples_per_period`` points.
    """
    if not t_end > 0 or not math.isfinite(t_end):
        raise ParameterError(f"Time span must be positive, got {t_end}")
    if samples is None:
        samples = math.ceil(t_end / (2 * math.pi) * samples_per_period) + 1
    if samples < 2:
        raise ParameterError(f"At least two samples required, got {samples}")
    return np.linspace(0.0, t_end, samples)


def validate_times(times: ArrayLike) -> NDArray[np.float64]:
    """Return ``times`` as a float array after checking it is usable."""
    t = np.atleast_1d(np.asarray(times, dtype=np.float64))
    if t.ndim != 1:
        raise ParameterError("Times must be one-dimensional")
    if not np.all(np.isfinite(t)):
        raise ParameterError("Times must be finite")
    if np.any(np.diff(t) <= 0):
        raise ParameterError("Times must be strictly increasing")
    return t


def evaluate_in_chunks(
    function: ChunkFunction,
    times: NDArray[np.float64],
    *,
    threads: int | None = None,
    chunk_size: int | None = None,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Evaluate ``function`` over blocks of ``times`` and join the results.

    Block boundaries depend only on ``chunk_size``, and blocks are joined in
    time order, so the output is identical for any number of threads.
    """
    threads = threads or config.threads
    chunk_size = chunk_size or config.chunk_size
    blocks = [
        times[start : start + chunk_size]
        for start in range(0, len(times), chunk_size)
    ]
    logger = structlog.get_logger(config.logger_name)
    logger.debug(
        "Evaluating time series",
        samples=len(times),
        chunks=len(blocks),
        threads=threads,
    )
    if threads <= 1 or len(blocks) <= 1:
        results = [function(block) for block in blocks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(function, blocks))
    if not results:
        empty = np.empty(0, dtype=np.float64)
        return empty, empty.copy()
    x = np.concatenate([r[0] for r in results])
    p = np.concatenate([r[1] for r in results])
    return x, p
