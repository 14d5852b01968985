"""Energy spectrum of H = p²/2 + x²/2 + (β/4)x⁴.

Three routes to the levels E_n are provided: the WKB series obtained by
quantizing the classical action, Rayleigh-Schrödinger perturbation theory
with matrix elements taken from ladder operators, and exact diagonalization
in the harmonic-oscillator (Fock) basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import structlog
from numpy.typing import NDArray

from ..config import config
from ..constants import ACTION_SERIES_WARNING, BETA_CAP
from ..exceptions import AboveBarrierError, ParameterError, TruncationError
from ..models import SpectrumMethod
from .eigen import solve_symmetric

__all__ = [
    "MethodComparison",
    "SpectrumTable",
    "TurningPoint",
    "action_of_energy_quadrature",
    "action_of_energy_series",
    "barrier_energy",
    "compare_methods",
    "diagonalize",
    "diagonalize_levels",
    "energy_of_action",
    "exact_spectrum",
    "hamiltonian",
    "momentum_operator",
    "perturbation_level",
    "perturbation_levels",
    "position_operator",
    "required_basis",
    "spectrum_table",
    "turning_point",
    "valid_index",
    "well_level_count",
    "wkb_level",
    "wkb_levels",
]

GUARD_FACTOR = 4.0
"""Multiple of √N excluded at the top of a truncated basis."""

GUARD_FLOOR = 10
"""Minimum number of basis states excluded at the top."""

LEVEL_TOLERANCE = 1e-10
"""Relative level shift tolerated when the basis is enlarged."""

BASIS_GROWTH = 1.5
"""Factor by which the basis grows while levels are not converged."""

MAX_BASIS = 4000
"""Largest Fock basis tried when searching for converged levels."""


@dataclass
class SpectrumTable:
    """Ordered energy levels from one method at one anharmonicity."""

    method: SpectrumMethod
    """How the levels were computed."""

    beta: float
    """Dimensionless anharmonicity."""

    levels: NDArray[np.float64]
    """Energies E_n, indexed by n from 0."""

    valid_up_to: int
    """Highest index whose level is trustworthy, or -1 if none is."""

    order: int | None = None
    """Perturbation order, for perturbative spectra."""

    basis_size: int | None = None
    """Fock basis size, for exact spectra."""

    def __post_init__(self) -> None:
        self.levels = np.asarray(self.levels, dtype=np.float64)
        if self.levels.ndim != 1:
            raise ParameterError("levels must be one-dimensional")
        self.valid_up_to = min(self.valid_up_to, len(self.levels) - 1)

    @property
    def label(self) -> str:
        """Short name used in CSV headers and on the command line."""
        if self.method is SpectrumMethod.PERTURBATION:
            return f"pt{self.order}"
        return self.method.value

    def gaps(self) -> NDArray[np.float64]:
        """Level spacings E_{n+1} − E_n over the whole table."""
        return np.diff(self.levels)


@dataclass(frozen=True)
class TurningPoint:
    """Classical turning point ±ã at a given energy."""

    amplitude: float
    """Turning point ã ≥ 0."""

    energy: float
    """Energy E = ã²/2 + (β/4)ã⁴."""

    beta: float
    """Dimensionless anharmonicity."""

    @property
    def residual(self) -> float:
        """Relative error of the energy relation at ``amplitude``."""
        a2 = self.amplitude**2
        return abs(a2 / 2 + self.beta * a2 * a2 / 4 - self.energy) / abs(
            self.energy
        )


@dataclass
class MethodComparison:
    """Errors of the series spectra against exact diagonalization."""

    beta: float
    n: NDArray[np.int64]
    wkb: NDArray[np.float64]
    pt1: NDArray[np.float64]
    pt2: NDArray[np.float64]
    exact: NDArray[np.float64]
    basis_size: int | None = None

    def level_error(self, method: str) -> NDArray[np.float64]:
        """Absolute error |E_n − E_n^exact| of ``wkb``, ``pt1`` or ``pt2``."""
        return np.abs(getattr(self, method) - self.exact)

    def gap_error(self, method: str) -> NDArray[np.float64]:
        """Absolute error of the spacing E_{n+1} − E_n, indexed by n."""
        return np.abs(np.diff(getattr(self, method)) - np.diff(self.exact))


def barrier_energy(beta: float) -> float:
    """Energy of the barrier top, 1/(4|β|) for β < 0, else infinity."""
    if beta < 0:
        return 1.0 / (4.0 * abs(beta))
    return math.inf


def well_level_count(beta: float) -> int | None:
    """Number of levels below the barrier top, or None for β ≥ 0.

    The action at the barrier energy is 2√2/(3π|β|) and level n lies in the
    well when n + ½ is below it.
    """
    if beta >= 0:
        return None
    action = 2.0 * math.sqrt(2.0) / (3.0 * math.pi * abs(beta))
    return math.ceil(action - 0.5)


def turning_point(energy: float, beta: float) -> TurningPoint:
    """Find the classical turning point for an energy.

    The root is written as ã² = 4E / (1 + √(1 + 4βE)), which equals
    (−1 + √(1 + 4βE))/β without cancellation and is continuous at β = 0.

    Raises
    ------
    revivalsim.exceptions.ParameterError
        The energy is not positive.
    revivalsim.exceptions.AboveBarrierError
        β < 0 and the energy reaches the barrier top.
    """
    if not energy > 0 or not math.isfinite(energy):
        raise ParameterError(f"Energy must be positive, got {energy}")
    barrier = barrier_energy(beta)
    if energy >= barrier:
        raise AboveBarrierError(energy, barrier)
    a2 = 4.0 * energy / (1.0 + math.sqrt(1.0 + 4.0 * beta * energy))
    return TurningPoint(amplitude=math.sqrt(a2), energy=energy, beta=beta)


def action_of_energy_series(energy: float, beta: float) -> float:
    """Classical action I(E) to second order in β.

    I = E − (3/8)βE² + (35/64)β²E³.
    """
    if abs(beta) * energy > ACTION_SERIES_WARNING:
        logger = structlog.get_logger(config.logger_name)
        logger.warning(
            "Action series used outside its range",
            beta=beta,
            energy=energy,
        )
    return (
        energy
        - 3.0 / 8.0 * beta * energy**2
        + 35.0 / 64.0 * beta**2 * energy**3
    )


@lru_cache(maxsize=8)
def _half_period_nodes(
    points: int,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    nodes, weights = np.polynomial.legendre.leggauss(points)
    theta = (nodes + 1.0) * math.pi / 4.0
    return theta, weights * math.pi / 4.0


def action_of_energy_quadrature(
    energy: float, beta: float, points: int | None = None
) -> float:
    """Classical action by numerical quadrature.

    The integral (1/π)∫ √(2(E − x²/2 − βx⁴/4)) dx between the turning points
    is rewritten with x = ã·sin θ.  The square root then factors as
    cos θ·√(ã² + (β/2)ã⁴(1 + sin²θ)), so the integrand is smooth and
    Gauss-Legendre converges exponentially.

    Parameters
    ----------
    energy
        Dimensionless energy.
    beta
        Dimensionless anharmonicity.
    points
        Number of Gauss-Legendre nodes on [0, π/2].  Defaults to the
        configured value.
    """
    tp = turning_point(energy, beta)
    a = tp.amplitude
    theta, weights = _half_period_nodes(points or config.quadrature_points)
    s2 = np.sin(theta) ** 2
    integrand = (
        a
        * np.cos(theta) ** 2
        * np.sqrt(a * a + 0.5 * beta * a**4 * (1.0 + s2))
    )
    return float(2.0 * np.dot(weights, integrand) / math.pi)


def energy_of_action(action: float, beta: float) -> float:
    """Energy as a function of the action, to second order in β.

    E = I + (3/8)βI² − (17/64)β²I³.
    """
    if not action > 0:
        raise ParameterError(f"Action must be positive, got {action}")
    return (
        action
        + 3.0 / 8.0 * beta * action**2
        - 17.0 / 64.0 * beta**2 * action**3
    )


def wkb_levels(count: int, beta: float) -> NDArray[np.float64]:
    """WKB energies E_0 … E_{count−1} with the action quantized as n + ½."""
    n = np.arange(count, dtype=np.float64)
    return (
        (n + 0.5)
        + 3.0 * beta / 8.0 * (n * n + n + 0.25)
        - beta**2
        * (
            17.0 / 64.0 * n**3
            + 51.0 / 128.0 * n**2
            + 51.0 / 256.0 * n
            + 17.0 / 512.0
        )
    )


def wkb_level(n: int, beta: float) -> float:
    """WKB energy of level ``n`` to second order in β."""
    if n < 0:
        raise ParameterError(f"Level index must be non-negative, got {n}")
    return float(wkb_levels(n + 1, beta)[n])


def position_operator(size: int) -> NDArray[np.float64]:
    """Matrix of x in the first ``size`` harmonic eigenstates.

    ⟨n|x|n+1⟩ = √((n+1)/2).
    """
    off = np.sqrt(np.arange(1, size, dtype=np.float64) / 2.0)
    return np.diag(off, 1) + np.diag(off, -1)


def momentum_operator(size: int) -> NDArray[np.complex128]:
    """Matrix of p in the first ``size`` harmonic eigenstates.

    ⟨n+1|p|n⟩ = i√((n+1)/2), so that a state displaced to +d at rest has
    ⟨p(t)⟩ = −d·sin t in the harmonic limit.
    """
    off = np.sqrt(np.arange(1, size, dtype=np.float64) / 2.0)
    return 1j * (np.diag(off, -1) - np.diag(off, 1))


def _quartic_operator(size: int) -> NDArray[np.float64]:
    # (x²)² is exact for rows and columns below size − 3.
    x = position_operator(size)
    x2 = x @ x
    return x2 @ x2


def hamiltonian(beta: float, size: int) -> NDArray[np.float64]:
    """Truncated Hamiltonian diag(n + ½) + (β/4)x⁴ in the Fock basis."""
    h = np.diag(np.arange(size, dtype=np.float64) + 0.5)
    h += beta / 4.0 * _quartic_operator(size)
    return 0.5 * (h + h.T)


def perturbation_levels(
    count: int, beta: float, order: int = 2
) -> NDArray[np.float64]:
    """Perturbative energies of the first ``count`` levels.

    First order adds (β/4)⟨n|x⁴|n⟩.  Second order adds
    −(β/4)² Σ_{m≠n} |⟨m|x⁴|n⟩|²/(m − n), summed over the nonzero matrix
    elements of an x⁴ matrix built from ladder operators.
    """
    if order not in (1, 2):
        raise ParameterError(f"Perturbation order must be 1 or 2: {order}")
    x4 = _quartic_operator(count + 8)
    n = np.arange(count)
    energies = n + 0.5 + beta / 4.0 * x4[n, n]
    if order == 1:
        return energies
    m = np.arange(count + 8)
    for k in range(count):
        column = x4[:, k]
        mask = (m != k) & (column != 0.0)
        energies[k] -= (beta / 4.0) ** 2 * float(
            np.sum(column[mask] ** 2 / (m[mask] - k))
        )
    return energies


def perturbation_level(n: int, beta: float, order: int = 2) -> float:
    """Perturbative energy of level ``n`` at first or second order."""
    if n < 0:
        raise ParameterError(f"Level index must be non-negative, got {n}")
    return float(perturbation_levels(n + 1, beta, order)[n])


def valid_index(
    size: int,
    guard_factor: float = GUARD_FACTOR,
    guard_floor: int = GUARD_FLOOR,
) -> int:
    """Highest trustworthy level index in a basis of ``size`` states.

    Levels within max(guard_floor, guard_factor·√N) of the basis edge are
    distorted by truncation.
    """
    guard = max(guard_floor, guard_factor * math.sqrt(size))
    return max(-1, math.floor(size - guard))


def required_basis(
    levels: int,
    guard_factor: float = GUARD_FACTOR,
    guard_floor: int = GUARD_FLOOR,
) -> int:
    """Smallest basis whose valid levels include ``levels − 1``."""
    size = max(4, levels)
    while valid_index(size, guard_factor, guard_floor) < levels - 1:
        size += 1
    return size


def _check_beta(beta: float) -> None:
    if not math.isfinite(beta) or abs(beta) > BETA_CAP:
        raise ParameterError(
            f"|beta| must not exceed {BETA_CAP}, got {beta}"
        )


def _guard(size: int, guard_factor: float, guard_floor: int) -> int:
    return math.ceil(max(guard_floor, guard_factor * math.sqrt(size)))


def _ordered_eigenpairs(
    beta: float, size: int, solver: str | None
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    values, vectors = solve_symmetric(hamiltonian(beta, size), solver)
    if beta >= 0:
        return values, vectors
    weights = vectors**2
    unused = np.ones(size, dtype=bool)
    order = np.empty(size, dtype=np.int64)
    for k in range(size):
        j = int(np.argmax(np.where(unused, weights[k], -1.0)))
        order[k] = j
        unused[j] = False
    return values[order], vectors[:, order]


def _well_top(levels: NDArray[np.float64], beta: float) -> int:
    above = np.nonzero(
        (levels >= barrier_energy(beta))
        | (np.diff(levels, prepend=-np.inf) <= 0)
    )[0]
    return int(above[0]) - 1 if len(above) > 0 else len(levels) - 1


def _converged_top(
    levels: NDArray[np.float64],
    extended: NDArray[np.float64],
    tolerance: float,
) -> int:
    # Eigenvalues carry rounding of order ε·‖H‖.
    scale = float(np.max(np.abs(extended)))
    floor = 256.0 * float(np.finfo(np.float64).eps) * scale
    shift = np.abs(extended[: len(levels)] - levels)
    limit = np.maximum(tolerance * np.maximum(1.0, np.abs(levels)), floor)
    moved = np.nonzero(shift > limit)[0]
    return int(moved[0]) - 1 if len(moved) > 0 else len(levels) - 1


def diagonalize(
    beta: float,
    size: int,
    solver: str | None = None,
    *,
    guard_factor: float = GUARD_FACTOR,
    guard_floor: int = GUARD_FLOOR,
    tolerance: float = LEVEL_TOLERANCE,
) -> tuple[NDArray[np.float64], NDArray[np.float64], int]:
    """Eigenpairs of the truncated Hamiltonian, ordered by level.

    For β ≥ 0 the eigenvalues are ascending.  For β < 0 the truncated matrix
    also holds spurious states localized beyond the barrier, so level n is
    taken to be the unused eigenvector with the largest weight on the
    harmonic state |n⟩.

    The trustworthy range stops below the basis-edge guard, below the
    barrier for β < 0, and for β ≠ 0 below the first level that moves by
    more than ``tolerance``·max(1, |E_n|) when the basis is enlarged by
    one guard width.

    Parameters
    ----------
    beta
        Dimensionless anharmonicity.
    size
        Fock basis size N ≥ 4.
    solver
        Eigensolver name; defaults to the configured solver.
    guard_factor
        Multiple of √N excluded at the top of the basis.
    guard_floor
        Minimum number of basis states excluded at the top.
    tolerance
        Relative level shift accepted between the basis and its extension.

    Returns
    -------
    tuple
        Levels, eigenvectors as columns in the same order, and the highest
        trustworthy index.
    """
    if size < 4:
        raise ParameterError(f"Basis size must be at least 4, got {size}")
    _check_beta(beta)
    logger = structlog.get_logger(config.logger_name)
    logger.debug("Diagonalizing", beta=beta, basis_size=size)
    levels, vectors = _ordered_eigenpairs(beta, size, solver)
    top = valid_index(size, guard_factor, guard_floor)

    if beta < 0:
        well = _well_top(levels, beta)
        if well < top:
            top = well
            logger.warning(
                "Levels above the barrier are not trustworthy",
                beta=beta,
                barrier=barrier_energy(beta),
                valid_up_to=top,
            )
    if beta != 0 and top >= 0:
        extended_size = size + _guard(size, guard_factor, guard_floor)
        extended, _ = _ordered_eigenpairs(beta, extended_size, solver)
        converged = _converged_top(levels, extended, tolerance)
        if converged < top:
            logger.debug(
                "Levels not converged in basis",
                beta=beta,
                basis_size=size,
                valid_up_to=converged,
            )
            top = converged
    return levels, vectors, top


def diagonalize_levels(
    beta: float,
    count: int,
    solver: str | None = None,
    *,
    guard_factor: float = GUARD_FACTOR,
    guard_floor: int = GUARD_FLOOR,
    tolerance: float = LEVEL_TOLERANCE,
) -> tuple[NDArray[np.float64], NDArray[np.float64], int, int]:
    """Diagonalize in a basis large enough to trust ``count`` levels.

    Starts from the guarded basis for ``count`` levels and enlarges it by a
    factor of 1.5 until the lowest ``count`` levels are converged, the
    trustworthy range stops growing (levels at the barrier for β < 0) or
    the basis reaches its upper limit.

    Returns
    -------
    tuple
        Levels, eigenvectors, highest trustworthy index and basis size.
    """

    def attempt(
        size: int,
    ) -> tuple[NDArray[np.float64], NDArray[np.float64], int]:
        return diagonalize(
            beta,
            size,
            solver,
            guard_factor=guard_factor,
            guard_floor=guard_floor,
            tolerance=tolerance,
        )

    size = required_basis(count, guard_factor, guard_floor)
    result = attempt(size)
    while result[2] < count - 1 and size < MAX_BASIS:
        grown_size = min(MAX_BASIS, math.ceil(BASIS_GROWTH * size))
        grown = attempt(grown_size)
        if grown[2] <= result[2]:
            break
        size, result = grown_size, grown
    if result[2] < count - 1:
        logger = structlog.get_logger(config.logger_name)
        logger.warning(
            "Fewer trustworthy levels than requested",
            beta=beta,
            requested=count,
            valid_up_to=result[2],
            basis_size=size,
        )
    return result[0], result[1], result[2], size


def exact_spectrum(
    beta: float,
    basis_size: int,
    solver: str | None = None,
    *,
    guard_factor: float = GUARD_FACTOR,
    guard_floor: int = GUARD_FLOOR,
    tolerance: float = LEVEL_TOLERANCE,
) -> SpectrumTable:
    """Levels from exact diagonalization in a truncated Fock basis.

    The guard and convergence settings are passed to `diagonalize`.

    Raises
    ------
    revivalsim.exceptions.EigensolverError
        The eigensolver did not converge.
    """
    levels, _, top = diagonalize(
        beta,
        basis_size,
        solver,
        guard_factor=guard_factor,
        guard_floor=guard_floor,
        tolerance=tolerance,
    )
    return SpectrumTable(
        method=SpectrumMethod.EXACT,
        beta=beta,
        levels=levels,
        valid_up_to=top,
        basis_size=basis_size,
    )


def _series_valid_up_to(levels: NDArray[np.float64], beta: float) -> int:
    top = len(levels) - 1
    above = np.nonzero(
        (levels >= barrier_energy(beta)) | (np.diff(levels, prepend=-1) <= 0)
    )[0]
    if len(above) > 0:
        top = int(above[0]) - 1
        logger = structlog.get_logger(config.logger_name)
        logger.warning(
            "Series levels reach the barrier", beta=beta, valid_up_to=top
        )
    return top


def spectrum_table(
    method: str,
    beta: float,
    count: int,
    *,
    basis_size: int | None = None,
    solver: str | None = None,
) -> SpectrumTable:
    """Build a spectrum of at least ``count`` levels by name.

    Parameters
    ----------
    method
        One of ``wkb``, ``pt1``, ``pt2`` or ``exact``.
    beta
        Dimensionless anharmonicity.
    count
        Number of levels required.
    basis_size
        Fock basis for ``exact``.  By default the basis is enlarged from
        the guarded size until ``count`` levels are converged; see
        `diagonalize_levels`.
    solver
        Eigensolver for ``exact``.
    """
    _check_beta(beta)
    if count < 1:
        raise ParameterError(f"At least one level required, got {count}")
    if method == "wkb":
        levels = wkb_levels(count, beta)
        return SpectrumTable(
            method=SpectrumMethod.WKB,
            beta=beta,
            levels=levels,
            valid_up_to=_series_valid_up_to(levels, beta),
        )
    if method in ("pt1", "pt2"):
        order = int(method[2])
        levels = perturbation_levels(count, beta, order)
        return SpectrumTable(
            method=SpectrumMethod.PERTURBATION,
            beta=beta,
            levels=levels,
            valid_up_to=_series_valid_up_to(levels, beta),
            order=order,
        )
    if method == "exact":
        if basis_size is not None:
            return exact_spectrum(beta, basis_size, solver)
        levels, _, top, size = diagonalize_levels(beta, count, solver)
        return SpectrumTable(
            method=SpectrumMethod.EXACT,
            beta=beta,
            levels=levels,
            valid_up_to=top,
            basis_size=size,
        )
    raise ParameterError(f"Unknown spectrum method {method}")


def compare_methods(
    beta: float,
    count: int,
    basis_size: int | None = None,
    solver: str | None = None,
) -> MethodComparison:
    """Compare WKB, first- and second-order perturbation theory to exact
    diagonalization over the first ``count`` levels.

    Raises
    ------
    revivalsim.exceptions.TruncationError
        ``basis_size`` is too small to trust ``count`` exact levels, or the
        levels did not converge.
    revivalsim.exceptions.ParameterError
        Some of the levels lie above the barrier (β < 0).
    """
    required = required_basis(count)
    if basis_size is not None and basis_size < required:
        raise TruncationError("Diagonalization basis", basis_size, required)
    exact = spectrum_table(
        "exact", beta, count, basis_size=basis_size, solver=solver
    )
    top = exact.valid_up_to
    if top < count - 1:
        if exact.levels[top + 1] >= barrier_energy(beta):
            raise ParameterError(
                f"Exact spectrum reaches the barrier above n={top}"
            )
        raise TruncationError("Exact spectrum", top + 1, count)
    return MethodComparison(
        beta=beta,
        n=np.arange(count),
        wkb=wkb_levels(count, beta),
        pt1=perturbation_levels(count, beta, 1),
        pt2=perturbation_levels(count, beta, 2),
        exact=exact.levels[:count],
        basis_size=exact.basis_size,
    )
