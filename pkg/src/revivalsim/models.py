"""Models for revivalsim.

Parameter sets and scalar results are pydantic models so that validation
happens once, at construction.  Array-valued results (spectra, coherent
states, time series) are dataclasses in the service modules that produce
them.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Literal

import structlog
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .config import config
from .constants import (
    BETA_CAP,
    BETA_WARNING,
    HBAR,
    RB87_MASS,
    SAMPLES_PER_PERIOD,
)

__all__ = [
    "BetaOrder",
    "ConfinementShift",
    "ConfinementSpec",
    "EnergyDerivatives",
    "EnvelopeModel",
    "LatticeDerived",
    "LatticeSpec",
    "ModelParams",
    "PhysicalScale",
    "Provenance",
    "ScenarioConfig",
    "SpectrumMethod",
    "TimeDirection",
    "TrapLimits",
    "TrapSpec",
]


class SpectrumMethod(str, Enum):
    """Method used to compute an energy spectrum."""

    WKB = "wkb"
    PERTURBATION = "perturbation"
    EXACT = "exact"


class Provenance(str, Enum):
    """Pipeline that produced a time series."""

    EXACT_DIAG = "exact-diag"
    ANALYTIC_SPECTRUM_SUM = "analytic-spectrum-sum"
    GAUSSIAN_GAP_SUM = "gaussian-gap-sum"
    ENVELOPE = "envelope"


class BetaOrder(str, Enum):
    """Order in β at which envelope time scales are evaluated."""

    LEADING = "leading"
    SECOND = "second"


class TimeDirection(str, Enum):
    """Direction of a time conversion."""

    TO_DIMENSIONLESS = "to-dimensionless"
    TO_PHYSICAL = "to-physical"


class PhysicalScale(BaseModel):
    """Mass, trap frequency and ħ fixing the dimensionless units."""

    model_config = ConfigDict(frozen=True)

    mass: float = Field(..., gt=0, title="Particle mass in kg")

    trap_frequency: float = Field(
        ..., gt=0, title="Harmonic angular frequency in rad/s"
    )

    hbar: float = Field(HBAR, gt=0, title="Reduced Planck constant in J·s")

    @property
    def length_unit(self) -> float:
        """Oscillator length √(ħ/mω) in m."""
        return math.sqrt(self.hbar / (self.mass * self.trap_frequency))

    @property
    def momentum_unit(self) -> float:
        """Oscillator momentum √(ħmω) in kg·m/s."""
        return math.sqrt(self.hbar * self.mass * self.trap_frequency)

    @property
    def energy_unit(self) -> float:
        """Harmonic quantum ħω in J."""
        return self.hbar * self.trap_frequency

    @property
    def beta_unit(self) -> float:
        """Quartic coefficient m²ω³/ħ in J/m⁴ corresponding to β = 1."""
        return self.mass**2 * self.trap_frequency**3 / self.hbar


class ModelParams(BaseModel):
    """Dimensionless problem definition: anharmonicity and displacement."""

    model_config = ConfigDict(frozen=True)

    beta: float = Field(..., title="Dimensionless anharmonicity β")

    displacement: float = Field(
        ..., allow_inf_nan=False, title="Dimensionless displacement d"
    )

    @model_validator(mode="after")
    def _check_regime(self) -> ModelParams:
        if not math.isfinite(self.beta):
            raise ValueError("beta must be finite")
        if abs(self.beta) > BETA_CAP:
            raise ValueError(
                f"|beta| = {abs(self.beta)} exceeds the cap of {BETA_CAP};"
                " the expansions in beta are meaningless there"
            )
        if abs(self.beta) > BETA_WARNING:
            logger = structlog.get_logger(config.logger_name)
            logger.warning(
                "Anharmonicity outside the small-beta regime",
                beta=self.beta,
                threshold=BETA_WARNING,
            )
        return self

    @property
    def gamma(self) -> float:
        """Coherent-state amplitude γ = |d|/√2."""
        return abs(self.displacement) / math.sqrt(2.0)


class EnvelopeModel(BaseModel):
    """Analytic collapse/revival model at a stated order in β."""

    model_config = ConfigDict(frozen=True)

    beta: float
    displacement: float = Field(..., title="Displacement d")
    gamma: float = Field(..., title="γ = d/√2")
    n_bar: float = Field(..., title="Mean occupation n̄ = γ²")
    b0: float = Field(..., title="Carrier frequency, gap at n̄")
    b1: float = Field(..., title="First derivative of the gap at n̄")
    b2: float = Field(..., title="Second-order gap coefficient")
    t_osc: float = Field(..., title="Fast oscillation period 2π/b0")
    t_r: float = Field(..., title="Revival time")
    t_c: float = Field(..., title="Collapse time √2σ")
    sigma: float = Field(..., title="Gaussian width of each revival")
    order: BetaOrder
    blur_ratio: float = Field(..., title="|b2|·n̄·T_r/2π")
    collapse_revival_ratio: float = Field(..., title="T_c/T_r")
    valid: bool = Field(..., title="Whether the envelope regime holds")


class EnergyDerivatives(BaseModel):
    """Derivatives of the WKB levels with respect to n at n̄."""

    model_config = ConfigDict(frozen=True)

    n_bar: float
    beta: float
    first: float
    second: float
    third: float
    hierarchical: bool = Field(
        ..., title="Whether |E'| ≫ |E''| ≫ |E'''| by the configured factor"
    )


class LatticeSpec(BaseModel):
    """Single well of an optical lattice V = K(1 − cos qx)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    depth: float = Field(..., gt=0, title="Lattice depth K")

    depth_in_recoils: bool = Field(
        True, title="Whether depth is given in recoil energies"
    )

    wavelength: float = Field(..., gt=0, title="Lattice wavelength in m")

    mass: float = Field(RB87_MASS, gt=0, title="Atomic mass in kg")

    alpha: float = Field(
        ..., gt=0, lt=0.5, title="Displacement fraction, q·d′ = απ"
    )

    hbar: float = Field(HBAR, gt=0, title="Reduced Planck constant")


class LatticeDerived(BaseModel):
    """Every quantity derived for a lattice well."""

    model_config = ConfigDict(frozen=True)

    q: float = Field(..., title="Lattice wavenumber 2π/λ in 1/m")
    recoil_energy: float = Field(..., title="E_r = ħ²q²/2m in J")
    depth: float = Field(..., title="Depth K in J")
    omega0: float = Field(..., title="Harmonic frequency in rad/s")
    beta_phys: float = Field(..., title="Quartic coefficient in J/m⁴")
    beta: float = Field(..., title="Dimensionless anharmonicity (signed)")
    d: float = Field(..., title="Dimensionless displacement")
    d_phys: float = Field(..., title="Displacement in m")
    t_osc: float = Field(..., title="Harmonic period, dimensionless")
    t_r: float = Field(..., title="Revival time, dimensionless")
    t_c: float = Field(..., title="Collapse time, dimensionless")
    t_osc_phys: float = Field(..., title="Harmonic period in s")
    t_r_phys: float = Field(..., title="Revival time in s")
    t_c_phys: float = Field(..., title="Collapse time in s")
    ratio_tr_tc: float = Field(..., title="T_r/T_c")


class TrapSpec(BaseModel):
    """Crossed-beam quasi-one-dimensional trap."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    omega_z: float = Field(..., gt=0, title="Longitudinal frequency, rad/s")
    omega_x: float = Field(..., gt=0, title="Transverse frequency, rad/s")
    beta: float = Field(..., title="Dimensionless anharmonicity")

    @model_validator(mode="after")
    def _check_frequencies(self) -> TrapSpec:
        if self.omega_x <= self.omega_z:
            raise ValueError("omega_x must exceed omega_z")
        if self.beta == 0 or not math.isfinite(self.beta):
            raise ValueError("beta must be finite and nonzero")
        return self


class TrapLimits(BaseModel):
    """Quasi-1D limits of a crossed-beam trap."""

    model_config = ConfigDict(frozen=True)

    n_max: float = Field(..., title="Frequency ratio ω_x/ω_z")
    n_max_levels: int = Field(..., title="Usable levels, floor of n_max")
    gamma_max: float
    d_max: float
    t_r_phys: float = Field(..., title="Leading-order revival time in s")


class ConfinementSpec(BaseModel):
    """Weak external harmonic confinement around a lattice."""

    model_config = ConfigDict(frozen=True)

    omega_ext: float = Field(..., ge=0, title="External frequency, rad/s")
    omega0: float = Field(..., gt=0, title="Lattice well frequency, rad/s")

    @model_validator(mode="after")
    def _check_ordering(self) -> ConfinementSpec:
        if self.omega_ext >= self.omega0:
            raise ValueError("omega_ext must be smaller than omega0")
        return self


class ConfinementShift(BaseModel):
    """Shift of a lattice minimum caused by external confinement."""

    model_config = ConfigDict(frozen=True)

    delta_x: float = Field(..., title="Exact fractional shift")
    delta_x_approx: float = Field(..., title="(ω_ext/ω0)² approximation")
    site_index: int
    unshifted_minimum: float = Field(..., title="nλ/2 in m")
    shifted_minimum: float = Field(..., title="nλ/2·(1 − δ_x) in m")
    shift: float = Field(..., title="nλ/2·δ_x in m")


class ScenarioConfig(BaseModel):
    """Settings for one ``evolve`` run.

    Either ``beta`` and ``displacement`` or ``lattice`` (the name of a
    lattice experiment preset from which both are derived) must be given.
    """

    model_config = ConfigDict(extra="forbid")

    beta: float | None = None
    displacement: float | None = None
    lattice: str | None = None
    truncation: int | None = Field(None, ge=1)
    t_end: float | None = Field(None, gt=0)
    span_revivals: float | None = Field(None, gt=0)
    samples: int | None = Field(None, ge=2)
    samples_per_period: int = Field(SAMPLES_PER_PERIOD, ge=1)
    method: Literal["wkb", "pt1", "pt2", "exact"] = "wkb"
    order: BetaOrder = BetaOrder.LEADING
    envelope: bool = True
    exact: bool = True
    output: str | None = None

    @model_validator(mode="after")
    def _check_scenario(self) -> ScenarioConfig:
        if self.lattice is None and (
            self.beta is None or self.displacement is None
        ):
            raise ValueError("beta and displacement (or lattice) required")
        if self.t_end is None and self.span_revivals is None:
            raise ValueError("t_end or span_revivals required")
        return self
