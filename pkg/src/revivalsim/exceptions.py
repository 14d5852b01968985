"""Custom exceptions for revivalsim."""

from __future__ import annotations

__all__ = [
    "AboveBarrierError",
    "EigensolverError",
    "ParameterError",
    "RevivalSimError",
    "TruncationError",
    "UnknownPresetError",
]


class RevivalSimError(Exception):
    """Base class for revivalsim errors."""


class ParameterError(RevivalSimError, ValueError):
    """An input value is outside the domain of the model."""


class AboveBarrierError(ParameterError):
    """No classical turning points exist for this energy.

    Raised for a negative anharmonicity when the energy reaches the top of
    the barrier, ``1 / (4 |beta|)``.

    Parameters
    ----------
    energy
        Requested dimensionless energy.
    barrier
        Energy of the barrier top.
    """

    def __init__(self, energy: float, barrier: float) -> None:
        msg = (
            f"Energy {energy} is above the barrier top {barrier}; no pair"
            " of classical turning points exists"
        )
        super().__init__(msg)
        self.energy = energy
        self.barrier = barrier


class TruncationError(RevivalSimError):
    """A basis or spectrum is too short for the requested calculation.

    Parameters
    ----------
    what
        Description of the truncated object.
    size
        Size that was provided.
    required
        Smallest size that would have been accepted.
    """

    def __init__(self, what: str, size: int, required: int) -> None:
        msg = f"{what} of size {size} is too small; N >= {required} required"
        super().__init__(msg)
        self.size = size
        self.required = required


class EigensolverError(RevivalSimError):
    """The eigensolver did not converge.

    Parameters
    ----------
    solver
        Name of the solver.
    sweeps
        Number of sweeps or iterations performed.
    off_norm
        Remaining off-diagonal norm, if known.
    """

    def __init__(
        self, solver: str, sweeps: int, off_norm: float | None = None
    ) -> None:
        msg = f"{solver} eigensolver did not converge after {sweeps} sweeps"
        if off_norm is not None:
            msg += f" (off-diagonal norm {off_norm:.3e})"
        super().__init__(msg)
        self.solver = solver
        self.sweeps = sweeps
        self.off_norm = off_norm


class UnknownPresetError(RevivalSimError):
    """Requested preset is not shipped with the package.

    Parameters
    ----------
    name
        Name that was requested.
    available
        Names of the presets that exist.
    """

    def __init__(self, name: str, available: list[str]) -> None:
        msg = f"Unknown preset {name}; available: {', '.join(available)}"
        super().__init__(msg)
        self.name = name
        self.available = available
