"""Tests for the revivalsim.services.experiments module."""

from __future__ import annotations

import math

import pytest
from pydantic import ValidationError

from revivalsim.constants import HBAR, RB87_MASS
from revivalsim.exceptions import ParameterError
from revivalsim.models import (
    ConfinementSpec,
    LatticeSpec,
    PhysicalScale,
    TrapSpec,
)
from revivalsim.services.experiments import (
    confinement_shift,
    experiment_report,
    lattice_confinement,
    lattice_derive,
    lattice_report,
    trap_limits,
)
from revivalsim.services.units import beta_to_dimensionless


def test_lattice_values(lattice_35er: LatticeSpec) -> None:
    derived = lattice_derive(lattice_35er)
    assert derived.depth == pytest.approx(7.581e-29, rel=0.01)
    assert abs(derived.beta) == pytest.approx(0.0398, rel=0.01)
    assert derived.beta < 0
    assert derived.d == pytest.approx(1.61, rel=0.01)
    assert derived.omega0 == pytest.approx(1.719e5, rel=0.01)
    assert derived.t_r == pytest.approx(210.3, rel=0.01)
    assert derived.t_c == pytest.approx(41.67, rel=0.01)
    assert derived.t_osc == pytest.approx(6.28, rel=0.01)
    assert derived.d_phys == pytest.approx(0.105e-6, rel=0.01)

    # Reference times are known to two significant figures.
    assert derived.t_r_phys == pytest.approx(1.2e-3, rel=0.02)
    assert derived.t_c_phys == pytest.approx(0.24e-3, rel=0.02)
    assert derived.t_osc_phys == pytest.approx(36e-6, rel=0.02)


def test_lattice_formulas(lattice_35er: LatticeSpec) -> None:
    derived = lattice_derive(lattice_35er)
    q = 2 * math.pi / 838e-9
    depth = derived.depth
    assert derived.q == pytest.approx(q, rel=1e-14)
    assert derived.recoil_energy == pytest.approx(
        HBAR**2 * q**2 / (2 * RB87_MASS), rel=1e-14
    )
    assert derived.beta == pytest.approx(
        -q * HBAR / (6 * math.sqrt(RB87_MASS * depth)), rel=1e-12
    )
    assert derived.d == pytest.approx(
        0.25 * math.pi * (depth * RB87_MASS) ** 0.25 / math.sqrt(q * HBAR),
        rel=1e-12,
    )
    assert derived.t_c_phys == pytest.approx(
        16
        / (0.25 * math.pi)
        * (RB87_MASS**3 / (HBAR**2 * depth * q**6)) ** 0.25,
        rel=1e-12,
    )
    assert derived.t_osc_phys == pytest.approx(
        2 * math.pi / q * math.sqrt(RB87_MASS / depth), rel=1e-12
    )

    # Same revival time through the generic unit conversion.
    assert derived.t_r_phys == pytest.approx(
        derived.t_r / derived.omega0, rel=1e-12
    )


def test_lattice_closure(lattice_35er: LatticeSpec) -> None:
    derived = lattice_derive(lattice_35er)
    scale = PhysicalScale(mass=RB87_MASS, trap_frequency=derived.omega0)
    assert derived.beta == pytest.approx(
        beta_to_dimensionless(derived.beta_phys, scale), rel=1e-12
    )
    assert derived.ratio_tr_tc == pytest.approx(
        math.pi * derived.d, rel=1e-12
    )


def test_depth_sweep(lattice_35er: LatticeSpec) -> None:
    shallow = lattice_derive(lattice_35er)
    expected = {175.0: 0.0178, 350.0: 0.0126}
    for depth, beta in expected.items():
        spec = lattice_35er.model_copy(update={"depth": depth})
        derived = lattice_derive(spec)
        assert abs(derived.beta) == pytest.approx(beta, rel=0.01)
        assert derived.t_r_phys == pytest.approx(
            shallow.t_r_phys, rel=1e-12
        )


def test_depth_in_joules(lattice_35er: LatticeSpec) -> None:
    derived = lattice_derive(lattice_35er)
    spec = lattice_35er.model_copy(
        update={"depth": derived.depth, "depth_in_recoils": False}
    )
    assert lattice_derive(spec).beta == pytest.approx(derived.beta)


def test_alpha(lattice_35er: LatticeSpec) -> None:
    derived = lattice_derive(lattice_35er)
    half = lattice_derive(lattice_35er.model_copy(update={"alpha": 0.125}))
    assert half.d == pytest.approx(derived.d / 2, rel=1e-12)
    assert half.beta == derived.beta

    with pytest.raises(ValidationError):
        LatticeSpec(depth=35.0, wavelength=838e-9, alpha=0.5)
    with pytest.raises(ValidationError):
        LatticeSpec(depth=35.0, wavelength=838e-9, alpha=0.0)
    with pytest.raises(ValidationError):
        LatticeSpec(depth=-1.0, wavelength=838e-9, alpha=0.25)


def test_trap_limits() -> None:
    spec = TrapSpec(omega_z=5.36e4, omega_x=1.04e6, beta=3.47e-5)
    limits = trap_limits(spec)
    assert limits.n_max == pytest.approx(19.4, rel=1e-3)
    assert limits.n_max_levels == 19
    assert limits.gamma_max == pytest.approx(3.11, abs=5e-3)
    assert limits.d_max == pytest.approx(4.4, abs=5e-3)
    assert 4.4 <= limits.t_r_phys <= 4.55
    assert limits.t_r_phys == pytest.approx(4.37, rel=0.05)

    limits = trap_limits(TrapSpec(omega_z=1.0, omega_x=4.0, beta=1e-3))
    assert limits.n_max_levels == 4
    assert limits.gamma_max == pytest.approx(1.0, rel=1e-15)

    with pytest.raises(ValidationError):
        TrapSpec(omega_z=2.0, omega_x=1.0, beta=1e-3)
    with pytest.raises(ValidationError):
        TrapSpec(omega_z=1.0, omega_x=2.0, beta=0.0)


def test_confinement_shift() -> None:
    spec = ConfinementSpec(omega_ext=0.0, omega0=1.719e5)
    shift = confinement_shift(spec, 3, 838e-9)
    assert shift.delta_x == 0.0
    assert shift.shifted_minimum == shift.unshifted_minimum
    assert shift.unshifted_minimum == pytest.approx(3 * 419e-9)

    omega_ext = 2 * math.pi * 60
    spec = ConfinementSpec(omega_ext=omega_ext, omega0=1.719e5)
    shift = confinement_shift(spec, 1, 838e-9)
    ratio2 = (omega_ext / 1.719e5) ** 2
    assert shift.delta_x == pytest.approx(4.81e-6, rel=1e-3)
    assert 0 < shift.delta_x <= shift.delta_x_approx == ratio2
    assert shift.delta_x_approx - shift.delta_x == pytest.approx(
        ratio2**2, rel=1e-5
    )
    assert shift.shift == pytest.approx(419e-9 * shift.delta_x)

    larger = confinement_shift(
        ConfinementSpec(omega_ext=2 * omega_ext, omega0=1.719e5), 1, 838e-9
    )
    assert larger.delta_x > shift.delta_x

    with pytest.raises(ValidationError):
        ConfinementSpec(omega_ext=2e5, omega0=1.719e5)
    with pytest.raises(ParameterError):
        confinement_shift(spec, 1, 0.0)


def test_lattice_confinement(lattice_35er: LatticeSpec) -> None:
    derived, shift, cubic = lattice_confinement(lattice_35er, 2 * math.pi * 60)
    assert shift.delta_x == pytest.approx(4.81e-6, rel=2e-3)
    expected = derived.depth * derived.q**4 * 419e-9 * shift.delta_x / 6
    assert cubic == pytest.approx(expected, rel=1e-12)


def test_lattice_report(lattice_35er: LatticeSpec) -> None:
    report = lattice_report(lattice_35er, lattice_derive(lattice_35er))
    assert report["kind"] == "lattice"
    assert report["depth_Er"] == pytest.approx(35.0)
    assert report["beta"] == pytest.approx(0.0398, rel=0.01)
    assert report["beta_signed"] == lattice_derive(lattice_35er).beta
    assert report["T_r_ms"] == pytest.approx(1.2, rel=0.02)
    assert report["d_phys_um"] == pytest.approx(0.105, rel=0.01)


def test_experiment_report() -> None:
    report = experiment_report(
        {
            "kind": "trap",
            "omega_z": 5.36e4,
            "omega_x": 1.04e6,
            "beta": 3.47e-5,
        }
    )
    assert report["kind"] == "trap"
    assert report["n_max"] == 19

    data = {
        "kind": "lattice",
        "depth": 35.0,
        "wavelength": 838e-9,
        "alpha": 0.25,
        "omega_ext": 2 * math.pi * 60,
        "site_index": 2,
    }
    report = experiment_report(data)
    assert report["site_index"] == 2
    assert report["delta_x"] == pytest.approx(4.81e-6, rel=2e-3)
    delta_x = float(report["delta_x"])
    assert report["shift_m"] == pytest.approx(838e-9 * delta_x)
    assert "omega_ext" in data

    with pytest.raises(ParameterError):
        experiment_report({"kind": "tweezer"})
    with pytest.raises(ParameterError):
        experiment_report({"depth": 35.0})
    with pytest.raises(ValidationError):
        experiment_report({"kind": "lattice", "depth": 35.0, "color": "red"})
