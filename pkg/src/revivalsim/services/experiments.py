"""Physical parameters for the two cold-atom realizations.

An optical-lattice well V = K(1 − cos qx) is expanded to quartic order
around its minimum, giving a harmonic frequency ω0 = q√(K/m) and a negative
quartic coefficient β′ = −Kq⁴/6.  A crossed-beam trap is quasi
one-dimensional while the occupied longitudinal levels stay below the first
transverse excitation.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from typing import Any

import structlog

from ..config import config
from ..exceptions import ParameterError
from ..models import (
    BetaOrder,
    ConfinementShift,
    ConfinementSpec,
    LatticeDerived,
    LatticeSpec,
    PhysicalScale,
    TrapLimits,
    TrapSpec,
)
from .envelope import build_model
from .units import (
    beta_to_dimensionless,
    length_to_dimensionless,
    time_to_physical,
)

__all__ = [
    "confinement_cubic_coefficient",
    "confinement_shift",
    "experiment_report",
    "lattice_confinement",
    "lattice_derive",
    "lattice_report",
    "trap_limits",
    "trap_report",
]


def lattice_derive(spec: LatticeSpec) -> LatticeDerived:
    """Derive every lattice quantity from depth, wavelength, mass and α.

    The dimensionless β and d go through the same unit conversion as any
    other physical input, with the scale set by the well frequency ω0.
    The revival time T_r′ = 16πm/(q²ħ) does not depend on the depth.
    """
    q = 2.0 * math.pi / spec.wavelength
    recoil = spec.hbar**2 * q**2 / (2.0 * spec.mass)
    depth = spec.depth * recoil if spec.depth_in_recoils else spec.depth
    omega0 = math.sqrt(depth / spec.mass) * q
    scale = PhysicalScale(
        mass=spec.mass, trap_frequency=omega0, hbar=spec.hbar
    )

    beta_phys = -depth * q**4 / 6.0
    beta = beta_to_dimensionless(beta_phys, scale)
    d_phys = spec.alpha * math.pi / q
    d = length_to_dimensionless(d_phys, scale)
    model = build_model(beta, d, BetaOrder.LEADING)

    t_osc = 2.0 * math.pi
    logger = structlog.get_logger(config.logger_name)
    logger.debug(
        "Derived lattice parameters", beta=beta, displacement=d, omega0=omega0
    )
    return LatticeDerived(
        q=q,
        recoil_energy=recoil,
        depth=depth,
        omega0=omega0,
        beta_phys=beta_phys,
        beta=beta,
        d=d,
        d_phys=d_phys,
        t_osc=t_osc,
        t_r=model.t_r,
        t_c=model.t_c,
        t_osc_phys=time_to_physical(t_osc, scale),
        t_r_phys=16.0 * math.pi * spec.mass / (q**2 * spec.hbar),
        t_c_phys=time_to_physical(model.t_c, scale),
        ratio_tr_tc=model.t_r / model.t_c,
    )


def trap_limits(spec: TrapSpec) -> TrapLimits:
    """Quasi-1D limits of a crossed-beam trap.

    The usable levels n_max = ⌊ω_x/ω_z⌋ bound the occupied band,
    n̄ + 3√n̄ < n_max, so γ² + 3γ = n_max gives the largest amplitude.
    """
    n_max = spec.omega_x / spec.omega_z
    levels = math.floor(n_max)
    gamma_max = (-3.0 + math.sqrt(9.0 + 4.0 * levels)) / 2.0
    t_r = 8.0 * math.pi / (3.0 * abs(spec.beta))
    return TrapLimits(
        n_max=n_max,
        n_max_levels=levels,
        gamma_max=gamma_max,
        d_max=math.sqrt(2.0) * gamma_max,
        t_r_phys=t_r / spec.omega_z,
    )


def confinement_shift(
    spec: ConfinementSpec, site_index: int, wavelength: float
) -> ConfinementShift:
    """Shift of lattice minimum ``site_index`` under external confinement.

    δ_x = ω_ext²/(ω_ext² + ω0²) moves the n-th minimum from nλ/2 to
    (nλ/2)(1 − δ_x).
    """
    if not wavelength > 0:
        raise ParameterError(f"Wavelength must be positive: {wavelength}")
    ratio2 = (spec.omega_ext / spec.omega0) ** 2
    delta_x = spec.omega_ext**2 / (spec.omega_ext**2 + spec.omega0**2)
    minimum = site_index * wavelength / 2.0
    return ConfinementShift(
        delta_x=delta_x,
        delta_x_approx=ratio2,
        site_index=site_index,
        unshifted_minimum=minimum,
        shifted_minimum=minimum * (1.0 - delta_x),
        shift=minimum * delta_x,
    )


def confinement_cubic_coefficient(
    derived: LatticeDerived, shift: ConfinementShift
) -> float:
    """Coefficient (1/6)Kq⁴(nλ/2)δ_x of the cubic term about a shifted site.

    The term is odd and first order in δ_x; it is reported and not used in
    the dynamics.
    """
    return (
        derived.depth
        * derived.q**4
        * shift.unshifted_minimum
        * shift.delta_x
        / 6.0
    )


def lattice_confinement(
    spec: LatticeSpec, omega_ext: float, site_index: int = 1
) -> tuple[LatticeDerived, ConfinementShift, float]:
    """Derive a lattice and the effect of an external trap on one site."""
    derived = lattice_derive(spec)
    shift = confinement_shift(
        ConfinementSpec(omega_ext=omega_ext, omega0=derived.omega0),
        site_index,
        spec.wavelength,
    )
    return derived, shift, confinement_cubic_coefficient(derived, shift)


def lattice_report(
    spec: LatticeSpec, derived: LatticeDerived
) -> dict[str, float | int | str | bool]:
    """Key-value summary of a lattice, with units in the key names."""
    return {
        "kind": "lattice",
        "depth_Er": derived.depth / derived.recoil_energy,
        "depth_J": derived.depth,
        "wavelength_m": spec.wavelength,
        "mass_kg": spec.mass,
        "alpha": spec.alpha,
        "q_per_m": derived.q,
        "recoil_energy_J": derived.recoil_energy,
        "omega0_per_s": derived.omega0,
        "beta_phys_J_per_m4": derived.beta_phys,
        "beta": abs(derived.beta),
        "beta_signed": derived.beta,
        "d": derived.d,
        "d_phys_um": derived.d_phys * 1e6,
        "T_osc": derived.t_osc,
        "T_r": derived.t_r,
        "T_c": derived.t_c,
        "T_osc_us": derived.t_osc_phys * 1e6,
        "T_r_ms": derived.t_r_phys * 1e3,
        "T_c_ms": derived.t_c_phys * 1e3,
        "ratio_Tr_Tc": derived.ratio_tr_tc,
    }


def trap_report(
    spec: TrapSpec, limits: TrapLimits
) -> dict[str, float | int | str | bool]:
    """Key-value summary of a crossed-beam trap."""
    return {
        "kind": "trap",
        "omega_z_per_s": spec.omega_z,
        "omega_x_per_s": spec.omega_x,
        "beta": spec.beta,
        "n_max_ratio": limits.n_max,
        "n_max": limits.n_max_levels,
        "gamma_max": limits.gamma_max,
        "d_max": limits.d_max,
        "T_r_s": limits.t_r_phys,
    }


def experiment_report(
    data: Mapping[str, Any],
) -> dict[str, float | int | str | bool]:
    """Build the report for a parsed experiment file.

    ``kind`` selects ``lattice`` or ``trap``.  A lattice may also give
    ``omega_ext`` (rad/s) and ``site_index`` for the confinement shift.

    Raises
    ------
    revivalsim.exceptions.ParameterError
        The kind is missing or unknown.
    pydantic.ValidationError
        The parameters violate the model constraints.
    """
    fields = dict(data)
    kind = fields.pop("kind", None)
    if kind == "trap":
        trap = TrapSpec(**fields)
        return trap_report(trap, trap_limits(trap))
    if kind != "lattice":
        raise ParameterError(
            f"Experiment kind must be lattice or trap, got {kind}"
        )

    omega_ext = fields.pop("omega_ext", None)
    site_index = int(fields.pop("site_index", 1))
    spec = LatticeSpec(**fields)
    if omega_ext is None:
        return lattice_report(spec, lattice_derive(spec))
    derived, shift, cubic = lattice_confinement(spec, omega_ext, site_index)
    report = lattice_report(spec, derived)
    report.update(
        {
            "omega_ext_per_s": float(omega_ext),
            "site_index": shift.site_index,
            "delta_x": shift.delta_x,
            "delta_x_approx": shift.delta_x_approx,
            "shifted_minimum_m": shift.shifted_minimum,
            "shift_m": shift.shift,
            "cubic_coefficient_J_per_m3": cubic,
        }
    )
    return report
