"""Conversion between physical and dimensionless quantities.

Lengths are measured in units of √(ħ/mω), times in 1/ω, momenta in √(ħmω),
energies in ħω and the quartic coefficient in m²ω³/ħ.  With these units the
Hamiltonian p²/2m + mω²x²/2 + β′x⁴/4 becomes p²/2 + x²/2 + βx⁴/4.
"""

from __future__ import annotations

import math

from ..exceptions import ParameterError
from ..models import PhysicalScale, TimeDirection

__all__ = [
    "beta_to_dimensionless",
    "beta_to_physical",
    "energy_to_dimensionless",
    "energy_to_physical",
    "length_to_dimensionless",
    "length_to_physical",
    "momentum_to_dimensionless",
    "momentum_to_physical",
    "time_between_units",
    "time_to_dimensionless",
    "time_to_physical",
]


def _finite(value: float, name: str) -> float:
    if not math.isfinite(value):
        raise ParameterError(f"{name} must be finite, got {value}")
    return float(value)


def length_to_dimensionless(x_phys: float, scale: PhysicalScale) -> float:
    """Convert a length in m to oscillator units."""
    return _finite(x_phys, "length") / scale.length_unit


def length_to_physical(x: float, scale: PhysicalScale) -> float:
    """Convert a length in oscillator units to m."""
    return _finite(x, "length") * scale.length_unit


def momentum_to_dimensionless(p_phys: float, scale: PhysicalScale) -> float:
    """Convert a momentum in kg·m/s to oscillator units."""
    return _finite(p_phys, "momentum") / scale.momentum_unit


def momentum_to_physical(p: float, scale: PhysicalScale) -> float:
    """Convert a momentum in oscillator units to kg·m/s."""
    return _finite(p, "momentum") * scale.momentum_unit


def energy_to_dimensionless(e_phys: float, scale: PhysicalScale) -> float:
    """Convert an energy in J to units of ħω."""
    return _finite(e_phys, "energy") / scale.energy_unit


def energy_to_physical(e: float, scale: PhysicalScale) -> float:
    """Convert an energy in units of ħω to J."""
    return _finite(e, "energy") * scale.energy_unit


def beta_to_dimensionless(beta_phys: float, scale: PhysicalScale) -> float:
    """Convert a quartic coefficient in J/m⁴ to the dimensionless β.

    Parameters
    ----------
    beta_phys
        Coefficient β′ of the ``β′x⁴/4`` term in J/m⁴.
    scale
        Physical scale defining the units.

    Returns
    -------
    float
        β = β′·ħ/(m²ω³).
    """
    return _finite(beta_phys, "beta") / scale.beta_unit


def beta_to_physical(beta: float, scale: PhysicalScale) -> float:
    """Convert the dimensionless β to a quartic coefficient in J/m⁴."""
    return _finite(beta, "beta") * scale.beta_unit


def time_to_dimensionless(t_phys: float, scale: PhysicalScale) -> float:
    """Convert a time in s to the dimensionless ωt."""
    return _finite(t_phys, "time") * scale.trap_frequency


def time_to_physical(t: float, scale: PhysicalScale) -> float:
    """Convert a dimensionless time to s."""
    return _finite(t, "time") / scale.trap_frequency


def time_between_units(
    t: float, scale: PhysicalScale, direction: TimeDirection
) -> float:
    """Convert a time in the given direction.

    Parameters
    ----------
    t
        Time in the source units.
    scale
        Physical scale defining the units.
    direction
        Whether to convert to dimensionless or to physical units.
    """
    if direction is TimeDirection.TO_DIMENSIONLESS:
        return time_to_dimensionless(t, scale)
    return time_to_physical(t, scale)
