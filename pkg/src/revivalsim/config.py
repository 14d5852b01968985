"""Configuration definition."""

from __future__ import annotations

import os
from dataclasses import dataclass

__all__ = ["Configuration", "config"]


@dataclass
class Configuration:
    """Configuration for revivalsim."""

    threads: int = int(os.getenv("REVIVAL_SIM_THREADS", "1"))
    """Number of worker threads used to evaluate time series.

    Output does not depend on this value; chunk boundaries are fixed by
    ``chunk_size``.  Set with the ``REVIVAL_SIM_THREADS`` environment
    variable or the ``--threads`` command-line flag.
    """

    chunk_size: int = int(os.getenv("REVIVAL_SIM_CHUNK_SIZE", "4096"))
    """Number of time samples evaluated together.

    Bounds the size of the intermediate phase matrices.  Set with the
    ``REVIVAL_SIM_CHUNK_SIZE`` environment variable.
    """

    quadrature_points: int = int(
        os.getenv("REVIVAL_SIM_QUADRATURE_POINTS", "64")
    )
    """Gauss-Legendre nodes used for the action integral.

    Set with the ``REVIVAL_SIM_QUADRATURE_POINTS`` environment variable.
    """

    eigensolver: str = os.getenv("REVIVAL_SIM_EIGENSOLVER", "lapack")
    """Dense symmetric eigensolver: ``lapack`` or ``jacobi``.

    The Jacobi solver is self-contained but slow above a few hundred basis
    states.  Set with the ``REVIVAL_SIM_EIGENSOLVER`` environment variable.
    """

    name: str = os.getenv("SAFIR_NAME", "revivalsim")
    """The application's name.

    Set with the ``SAFIR_NAME`` environment variable.
    """

    profile: str = os.getenv("SAFIR_PROFILE", "development")
    """Logging profile: "development" or "production".

    The development profile renders logs for a console, production emits
    JSON.  Set with the ``SAFIR_PROFILE`` environment variable.
    """

    logger_name: str = os.getenv("SAFIR_LOGGER", "revivalsim")
    """The root name of the application's logger.

    Set with the ``SAFIR_LOGGER`` environment variable.
    """

    log_level: str = os.getenv("SAFIR_LOG_LEVEL", "WARNING")
    """The log level of the application's logger.

    Set with the ``SAFIR_LOG_LEVEL`` environment variable or the
    ``--log-level`` command-line flag.
    """


config = Configuration()
"""Configuration for revivalsim."""
