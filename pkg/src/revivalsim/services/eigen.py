"""Dense symmetric eigensolvers."""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg
import structlog
from numpy.typing import NDArray

from ..config import config
from ..exceptions import EigensolverError, ParameterError

__all__ = ["jacobi_eigh", "lapack_eigh", "solve_symmetric"]


def lapack_eigh(
    matrix: NDArray[np.float64],
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Diagonalize a real symmetric matrix with LAPACK.

    Returns
    -------
    tuple
        Ascending eigenvalues and the matching eigenvectors as columns.

    Raises
    ------
    revivalsim.exceptions.EigensolverError
        LAPACK reported a convergence failure.
    """
    try:
        values, vectors = scipy.linalg.eigh(matrix, driver="evr")
    except np.linalg.LinAlgError as e:
        logger = structlog.get_logger(config.logger_name)
        logger.error("LAPACK eigensolver failed", error=str(e))
        raise EigensolverError("lapack", 1) from e
    return values, vectors


def jacobi_eigh(
    matrix: NDArray[np.float64],
    *,
    tolerance: float = 1e-12,
    max_sweeps: int = 60,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Diagonalize a real symmetric matrix with cyclic Jacobi rotations.

    Rotations are applied in a fixed row-by-row order, so the result is
    deterministic.  Convergence is declared once the off-diagonal Frobenius
    norm falls below ``tolerance`` times the norm of the matrix.

    Parameters
    ----------
    matrix
        Real symmetric matrix.  Only its values are read; it is not
        modified.
    tolerance
        Relative tolerance on the off-diagonal norm.
    max_sweeps
        Number of full sweeps allowed before giving up.

    Returns
    -------
    tuple
        Ascending eigenvalues and the matching eigenvectors as columns.

    Raises
    ------
    revivalsim.exceptions.EigensolverError
        The off-diagonal norm did not reach the tolerance.
    """
    a = np.array(matrix, dtype=np.float64, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ParameterError(f"Matrix must be square, got shape {a.shape}")
    n = a.shape[0]
    v = np.eye(n)
    threshold = tolerance * max(np.linalg.norm(a), np.finfo(float).tiny)
    logger = structlog.get_logger(config.logger_name)

    off = _off_norm(a)
    for sweep in range(1, max_sweeps + 1):
        if off <= threshold:
            logger.debug("Jacobi converged", sweeps=sweep - 1, size=n)
            return _sorted_pairs(np.diag(a).copy(), v)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
        off = _off_norm(a)

    if off <= threshold:
        return _sorted_pairs(np.diag(a).copy(), v)
    logger.error(
        "Jacobi did not converge", sweeps=max_sweeps, off_norm=off, size=n
    )
    raise EigensolverError("jacobi", max_sweeps, off)


def solve_symmetric(
    matrix: NDArray[np.float64], solver: str | None = None
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Diagonalize with the named solver (``lapack`` or ``jacobi``).

    The default is taken from the configuration.
    """
    solver = solver or config.eigensolver
    if solver == "lapack":
        return lapack_eigh(matrix)
    if solver == "jacobi":
        return jacobi_eigh(matrix)
    raise ParameterError(f"Unknown eigensolver {solver}")


def _off_norm(a: NDArray[np.float64]) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _sorted_pairs(
    values: NDArray[np.float64], vectors: NDArray[np.float64]
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    order = np.argsort(values, kind="stable")
    return values[order], vectors[:, order]
