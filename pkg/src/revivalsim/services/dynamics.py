"""Evolution of a displaced harmonic ground state.

The initial state is the harmonic ground state shifted by d, a coherent
state with amplitude γ = d/√2.  Two pipelines give ⟨x(t)⟩ and ⟨p(t)⟩: a
trigonometric sum over level spacings that keeps the harmonic eigenstates
(`expectation_series`), and full evolution in the eigenbasis of the
truncated Hamiltonian (`expectation_exact`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray
from scipy.special import gammainc, gammaln

from ..config import config
from ..constants import TAIL_TOLERANCE
from ..exceptions import AboveBarrierError, ParameterError, TruncationError
from ..models import Provenance
from .spectrum import (
    SpectrumTable,
    barrier_energy,
    diagonalize,
    diagonalize_levels,
    hamiltonian,
    momentum_operator,
    position_operator,
    required_basis,
    well_level_count,
)
from .timegrid import evaluate_in_chunks, validate_times

__all__ = [
    "CoherentState",
    "ExactPropagator",
    "TimeSeries",
    "coherent_state",
    "default_truncation",
    "diagonalization_basis",
    "expectation_exact",
    "expectation_series",
    "minimum_truncation",
    "occupation_stats",
    "poisson_tail",
    "tail_truncation",
]


@dataclass
class CoherentState:
    """Fock-basis coefficients of the displaced harmonic ground state."""

    gamma: float
    """Amplitude γ = d/√2 ≥ 0."""

    coefficients: NDArray[np.float64]
    """c_n = e^{−γ²/2}γⁿ/√n! for n below the truncation."""

    @property
    def truncation(self) -> int:
        """Number of retained coefficients N."""
        return len(self.coefficients)

    @property
    def displacement(self) -> float:
        """Displacement d = √2γ."""
        return math.sqrt(2.0) * self.gamma

    @property
    def occupation(self) -> NDArray[np.float64]:
        """Occupation probabilities |c_n|²."""
        return self.coefficients**2

    @property
    def tail(self) -> float:
        """Probability lost to the truncation, P(n ≥ N) for Poisson(γ²)."""
        return poisson_tail(self.gamma, self.truncation)


@dataclass
class TimeSeries:
    """Sampled ⟨x(t)⟩ and ⟨p(t)⟩."""

    times: NDArray[np.float64]
    """Dimensionless times, strictly increasing."""

    x: NDArray[np.float64]
    """⟨x̂(t)⟩ at each time."""

    p: NDArray[np.float64]
    """⟨p̂(t)⟩ at each time."""

    provenance: Provenance
    """Pipeline that produced the values."""

    metadata: dict[str, str | float | int] = field(default_factory=dict)
    """Parameters recorded alongside the data (β, d, N, method)."""

    def __post_init__(self) -> None:
        self.times = validate_times(self.times)
        self.x = np.asarray(self.x, dtype=np.float64)
        self.p = np.asarray(self.p, dtype=np.float64)
        if not (len(self.times) == len(self.x) == len(self.p)):
            raise ParameterError("times, x and p must have equal lengths")

    def negated(self) -> TimeSeries:
        """The series of the mirror-image initial state, d → −d."""
        metadata = dict(self.metadata)
        if "d" in metadata:
            metadata["d"] = -float(metadata["d"])
        return TimeSeries(
            times=self.times.copy(),
            x=-self.x,
            p=-self.p,
            provenance=self.provenance,
            metadata=metadata,
        )


def poisson_tail(gamma: float, truncation: int) -> float:
    """Occupation probability at or above ``truncation`` for amplitude γ.

    P(n ≥ N) for a Poisson distribution of mean γ² is the regularized lower
    incomplete gamma function P(N, γ²).
    """
    return float(gammainc(truncation, gamma * gamma))


def tail_truncation(gamma: float) -> int:
    """Smallest truncation whose Poisson tail is within the tolerance."""
    size = 1
    while poisson_tail(gamma, size) > TAIL_TOLERANCE:
        size += 1
    return size


def minimum_truncation(gamma: float) -> int:
    """Smallest accepted truncation, ⌈γ² + 10γ + 10⌉."""
    return math.ceil(gamma * gamma + 10.0 * gamma + 10.0)


def default_truncation(displacement: float) -> int:
    """Default truncation ⌈γ² + 10γ + 20⌉ for a displacement d."""
    gamma = abs(displacement) / math.sqrt(2.0)
    return math.ceil(gamma * gamma + 10.0 * gamma + 20.0)


def diagonalization_basis(truncation: int) -> int:
    """Fock basis needed to trust the lowest ``truncation`` exact levels."""
    return required_basis(truncation)


def coherent_state(
    displacement: float, truncation: int | None = None
) -> CoherentState:
    """Coefficients of the ground state displaced by ``displacement``.

    The coefficients are accumulated in logarithms,
    log c_n = −γ²/2 + n·log γ − ½·log n!, so large n does not overflow.

    Parameters
    ----------
    displacement
        Dimensionless displacement d ≥ 0.  Negative displacements are
        handled by the evolution functions through parity.
    truncation
        Number of basis states N.  Defaults to ⌈γ² + 10γ + 20⌉.

    Raises
    ------
    revivalsim.exceptions.TruncationError
        N is below ⌈γ² + 10γ + 10⌉ or leaves more than the tolerated
        probability outside the basis.
    """
    if not math.isfinite(displacement) or displacement < 0:
        raise ParameterError(
            f"Displacement must be finite and non-negative: {displacement}"
        )
    gamma = displacement / math.sqrt(2.0)
    size = truncation or default_truncation(displacement)
    required = minimum_truncation(gamma)
    if size < required:
        raise TruncationError("Coherent-state basis", size, required)

    coefficients = np.zeros(size)
    if gamma == 0.0:
        coefficients[0] = 1.0
    else:
        n = np.arange(size, dtype=np.float64)
        log_c = -0.5 * gamma**2 + n * math.log(gamma) - 0.5 * gammaln(n + 1)
        coefficients = np.exp(log_c)
    state = CoherentState(gamma=gamma, coefficients=coefficients)
    if state.tail > TAIL_TOLERANCE:
        raise TruncationError(
            "Coherent-state basis", size, tail_truncation(gamma)
        )
    return state


def occupation_stats(state: CoherentState) -> tuple[float, float]:
    """Mean and variance of n under the occupation probabilities."""
    weights = state.occupation
    n = np.arange(state.truncation, dtype=np.float64)
    mean = float(np.dot(weights, n))
    variance = float(np.dot(weights, (n - mean) ** 2))
    return mean, variance


def expectation_series(
    state: CoherentState,
    spectrum: SpectrumTable,
    times: ArrayLike,
    *,
    threads: int | None = None,
) -> TimeSeries:
    """⟨x(t)⟩ and ⟨p(t)⟩ from level spacings, keeping harmonic eigenstates.

    ⟨x⟩ = √2 Σ c_n c_{n+1} √(n+1) cos(ΔE_n t) and ⟨p⟩ is the same sum with
    −sin, where ΔE_n = E_{n+1} − E_n comes from ``spectrum``.  Any spectrum
    method may be used.

    Raises
    ------
    revivalsim.exceptions.TruncationError
        The spectrum's trustworthy range does not cover the state.
    """
    t = validate_times(times)
    size = state.truncation
    if spectrum.valid_up_to < size - 1:
        raise TruncationError(
            f"{spectrum.label} spectrum", spectrum.valid_up_to + 1, size
        )
    gaps = np.diff(spectrum.levels[:size])
    n = np.arange(size - 1, dtype=np.float64)
    c = state.coefficients
    weights = math.sqrt(2.0) * c[:-1] * c[1:] * np.sqrt(n + 1.0)

    def block(
        tb: NDArray[np.float64],
    ) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        phase = np.outer(gaps, tb)
        return weights @ np.cos(phase), -(weights @ np.sin(phase))

    x, p = evaluate_in_chunks(block, t, threads=threads)
    return TimeSeries(
        times=t,
        x=x,
        p=p,
        provenance=Provenance.ANALYTIC_SPECTRUM_SUM,
        metadata={
            "beta": spectrum.beta,
            "d": state.displacement,
            "N": size,
            "method": spectrum.label,
        },
    )


class ExactPropagator:
    """Exact evolution of a displaced ground state.

    The Hamiltonian is diagonalized in a Fock basis large enough that every
    level carrying weight of the truncated coherent state is trustworthy.
    The state is projected onto the eigenvectors once; evolution is then a
    phase per eigenvector.

    Parameters
    ----------
    beta
        Dimensionless anharmonicity.
    displacement
        Dimensionless displacement d.  For d < 0 the state displaced by |d|
        is evolved and both observables change sign, which is exact because
        H is even in x.
    truncation
        Size N of the coherent-state truncation.  Defaults to
        ⌈γ² + 10γ + 20⌉.
    basis_size
        Diagonalization basis.  Defaults to the smallest basis whose
        guarded range covers N levels, enlarged until those levels are
        converged.
    solver
        Eigensolver name; defaults to the configured solver.

    Raises
    ------
    revivalsim.exceptions.AboveBarrierError
        Raised if β < 0 and the truncation holds more levels than the well.
    revivalsim.exceptions.TruncationError
        Raised if the basis is too small for N trustworthy levels.
    """

    def __init__(
        self,
        beta: float,
        displacement: float,
        truncation: int | None = None,
        *,
        basis_size: int | None = None,
        solver: str | None = None,
    ) -> None:
        self.beta = beta
        self.displacement = displacement
        self._sign = -1.0 if displacement < 0 else 1.0
        self.state = coherent_state(abs(displacement), truncation)
        count = self.state.truncation
        capacity = well_level_count(beta)
        if capacity is not None and count > capacity:
            # Harmonic energy of the highest retained level.
            raise AboveBarrierError(count - 0.5, barrier_energy(beta))
        required = diagonalization_basis(count)
        if basis_size is None:
            levels, vectors, top, size = diagonalize_levels(
                beta, count, solver
            )
        elif basis_size < required:
            raise TruncationError(
                "Diagonalization basis", basis_size, required
            )
        else:
            size = basis_size
            levels, vectors, top = diagonalize(beta, size, solver)
        if top < count - 1:
            barrier = barrier_energy(beta)
            if levels[top + 1] >= barrier:
                raise AboveBarrierError(float(levels[top + 1]), barrier)
            needed = diagonalize_levels(beta, count, solver)[3]
            raise TruncationError("Diagonalization basis", size, needed)
        self.basis_size = size

        self.levels = levels
        self._vectors = vectors
        initial = np.zeros(size)
        initial[: self.state.truncation] = self.state.coefficients
        self.amplitudes = vectors.T @ initial
        self._x = vectors.T @ position_operator(size) @ vectors
        self._p = vectors.T @ momentum_operator(size) @ vectors
        self._hamiltonian = hamiltonian(beta, size)

        logger = structlog.get_logger(config.logger_name)
        logger.debug(
            "Prepared exact propagator",
            beta=beta,
            displacement=displacement,
            truncation=self.state.truncation,
            basis_size=size,
        )

    def _phased(self, t: NDArray[np.float64]) -> NDArray[np.complex128]:
        return self.amplitudes[:, None] * np.exp(
            -1j * np.outer(self.levels, t)
        )

    def state_at(self, t: float) -> NDArray[np.complex128]:
        """Fock-basis state vector at time ``t`` (for d ≥ 0)."""
        return self._vectors @ self._phased(np.array([t]))[:, 0]

    def norm(self, t: float) -> float:
        """Norm of the evolved state."""
        psi = self.state_at(t)
        return float(np.vdot(psi, psi).real)

    def energy(self, t: float) -> float:
        """Energy expectation ⟨H⟩ of the evolved state."""
        psi = self.state_at(t)
        return float(np.vdot(psi, self._hamiltonian @ psi).real)

    def expectation(
        self, times: ArrayLike, *, threads: int | None = None
    ) -> TimeSeries:
        """⟨x(t)⟩ and ⟨p(t)⟩ at the requested times."""
        t = validate_times(times)

        def block(
            tb: NDArray[np.float64],
        ) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
            phased = self._phased(tb)
            conj = phased.conj()
            x = np.sum(conj * (self._x @ phased), axis=0).real
            p = np.sum(conj * (self._p @ phased), axis=0).real
            return self._sign * x, self._sign * p

        x, p = evaluate_in_chunks(block, t, threads=threads)
        return TimeSeries(
            times=t,
            x=x,
            p=p,
            provenance=Provenance.EXACT_DIAG,
            metadata={
                "beta": self.beta,
                "d": self.displacement,
                "N": self.state.truncation,
                "basis": self.basis_size,
            },
        )


def expectation_exact(
    beta: float,
    displacement: float,
    truncation: int | None,
    times: ArrayLike,
    *,
    basis_size: int | None = None,
    solver: str | None = None,
    threads: int | None = None,
) -> TimeSeries:
    """⟨x(t)⟩ and ⟨p(t)⟩ by exact evolution in the eigenbasis of H."""
    propagator = ExactPropagator(
        beta,
        displacement,
        truncation,
        basis_size=basis_size,
        solver=solver,
    )
    return propagator.expectation(times, threads=threads)
