"""Analytic collapse and revival model.

Around the mean occupation n̄ = γ² the WKB level spacing is expanded as
ΔE_n = b0 + b1(n − n̄) + b2(n − n̄)².  b0 sets the fast carrier, b1 the
revival time T_r = 2π/b1, and the Poisson spread of the occupations turns
each revival into a Gaussian of width σ = 1/(γb1).
"""

from __future__ import annotations

import math

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray

from ..config import config
from ..constants import (
    BETA_CAP,
    BLUR_GATE,
    COLLAPSE_REVIVAL_GATE,
    HIERARCHY_FACTOR,
)
from ..exceptions import ParameterError
from ..models import BetaOrder, EnergyDerivatives, EnvelopeModel, Provenance
from .dynamics import TimeSeries
from .timegrid import evaluate_in_chunks, validate_times

__all__ = [
    "analytic_xp",
    "build_model",
    "energy_derivatives",
    "envelope_value",
    "gap",
    "gaussian_gap_sum",
    "model_report",
]


def gap(n: float, beta: float) -> float:
    """Spacing E_{n+1} − E_n of the WKB levels.

    ΔE_n = 1 + (3β/4)(n + 1) − β²((51/64)n² + (51/32)n + 221/256), the
    exact difference of the second-order WKB levels.
    """
    if n < 0:
        raise ParameterError(f"Level index must be non-negative, got {n}")
    return (
        1.0
        + 0.75 * beta * (n + 1.0)
        - beta**2 * (51.0 / 64.0 * n**2 + 51.0 / 32.0 * n + 221.0 / 256.0)
    )


def build_model(
    beta: float, displacement: float, order: BetaOrder = BetaOrder.LEADING
) -> EnvelopeModel:
    """Build the envelope model for a displacement and anharmonicity.

    At leading order b0 = 1 + (3/4)β(n̄ + 1), b1 = 3β/4, so
    T_r = 8π/(3β) and 1/σ = (3/4)γβ.  At second order b0 is the full gap
    at n̄ and the revival time carries its β correction,
    T_r = (8π/3β)(1 + (17/8)β(1 + n̄)), with σ = T_r/(2πγ).  In both cases
    T_c = √2σ, so T_r/T_c = πd.

    Negative β gives a softening well; its time scales use |β| while b0
    and b1 keep their signs.

    Raises
    ------
    revivalsim.exceptions.ParameterError
        β is zero (no revivals) or out of range, or d is not positive.
    """
    if beta == 0:
        raise ParameterError("No anharmonicity: beta = 0 has no revivals")
    if not math.isfinite(beta) or abs(beta) > BETA_CAP:
        raise ParameterError(f"|beta| must not exceed {BETA_CAP}: {beta}")
    if not displacement > 0 or not math.isfinite(displacement):
        raise ParameterError(
            f"Displacement must be positive, got {displacement}"
        )
    gamma = displacement / math.sqrt(2.0)
    n_bar = gamma**2
    b2 = -51.0 / 64.0 * beta**2
    leading_t_r = 8.0 * math.pi / (3.0 * abs(beta))
    if order is BetaOrder.LEADING:
        b0 = 1.0 + 0.75 * beta * (n_bar + 1.0)
        b1 = 0.75 * beta
        t_r = leading_t_r
    else:
        b0 = gap(n_bar, beta)
        b1 = 3.0 / 32.0 * (8.0 * beta - 17.0 * beta**2 * (1.0 + n_bar))
        t_r = leading_t_r * (1.0 + 17.0 / 8.0 * beta * (1.0 + n_bar))
    sigma = t_r / (2.0 * math.pi * gamma)
    t_c = math.sqrt(2.0) * sigma
    blur_ratio = abs(b2) * n_bar * t_r / (2.0 * math.pi)
    ratio = t_c / t_r
    valid = ratio < COLLAPSE_REVIVAL_GATE and blur_ratio < BLUR_GATE
    if not valid:
        logger = structlog.get_logger(config.logger_name)
        logger.warning(
            "Envelope model outside its regime",
            beta=beta,
            displacement=displacement,
            collapse_revival_ratio=ratio,
            blur_ratio=blur_ratio,
        )
    return EnvelopeModel(
        beta=beta,
        displacement=displacement,
        gamma=gamma,
        n_bar=n_bar,
        b0=b0,
        b1=b1,
        b2=b2,
        t_osc=2.0 * math.pi / b0,
        t_r=t_r,
        t_c=t_c,
        sigma=sigma,
        order=order,
        blur_ratio=blur_ratio,
        collapse_revival_ratio=ratio,
        valid=valid,
    )


def envelope_value(
    model: EnvelopeModel, t: ArrayLike
) -> NDArray[np.float64] | float:
    """Gaussian-sum envelope f_env(t) = √2γ Σ_m exp(−½((t − mT_r)/σ)²).

    Revivals m = 0 … ⌈t/T_r⌉ + 1 are included; farther ones contribute
    below double precision.
    """
    times = np.asarray(t, dtype=np.float64)
    if np.any(times < 0):
        raise ParameterError("Envelope is defined for t >= 0")
    last = math.ceil(float(np.max(times, initial=0.0)) / model.t_r) + 1
    m = np.arange(last + 1, dtype=np.float64)
    offsets = (times[..., None] - m * model.t_r) / model.sigma
    value = math.sqrt(2.0) * model.gamma * np.sum(
        np.exp(-0.5 * offsets**2), axis=-1
    )
    if value.ndim == 0:
        return float(value)
    return value


def analytic_xp(model: EnvelopeModel, times: ArrayLike) -> TimeSeries:
    """Closed-form ⟨x(t)⟩ = f_env·cos(b0 t) and ⟨p(t)⟩ = −f_env·sin(b0 t)."""
    t = validate_times(times)
    envelope = np.asarray(envelope_value(model, t))
    return TimeSeries(
        times=t,
        x=envelope * np.cos(model.b0 * t),
        p=-envelope * np.sin(model.b0 * t),
        provenance=Provenance.ENVELOPE,
        metadata={
            "beta": model.beta,
            "d": model.displacement,
            "order": model.order.value,
        },
    )


def gaussian_gap_sum(
    model: EnvelopeModel,
    times: ArrayLike,
    *,
    threads: int | None = None,
) -> TimeSeries:
    """Sum over Gaussian-weighted levels with the expanded spacing.

    A(t) = (1/√π) Σ_n exp(−(n − n̄)²/2γ²) exp(−i t ΔE_n), with
    ΔE_n = b0 + b1 n′ + b2 n′² and n′ = n − n̄; ⟨x⟩ = Re A and ⟨p⟩ = Im A.
    This is the step between the exact series and the closed-form envelope.
    At second order it keeps b2, which blurs later revivals.
    """
    t = validate_times(times)
    gamma = model.gamma
    top = math.ceil(model.n_bar + 10.0 * gamma + 10.0)
    shifted = np.arange(top + 1, dtype=np.float64) - model.n_bar
    weights = np.exp(-(shifted**2) / (2.0 * gamma**2)) / math.sqrt(math.pi)
    b2 = model.b2 if model.order is BetaOrder.SECOND else 0.0
    spacing = model.b0 + model.b1 * shifted + b2 * shifted**2

    def block(
        tb: NDArray[np.float64],
    ) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        phase = np.outer(spacing, tb)
        return weights @ np.cos(phase), -(weights @ np.sin(phase))

    x, p = evaluate_in_chunks(block, t, threads=threads)
    return TimeSeries(
        times=t,
        x=x,
        p=p,
        provenance=Provenance.GAUSSIAN_GAP_SUM,
        metadata={
            "beta": model.beta,
            "d": model.displacement,
            "order": model.order.value,
        },
    )


def energy_derivatives(n_bar: float, beta: float) -> EnergyDerivatives:
    """Derivatives of the WKB energy with respect to n at ``n_bar``.

    Collapse and revival need E′ ≫ E″ ≫ E‴; ``hierarchical`` reports
    whether each derivative exceeds the next by the configured factor.
    """
    action = n_bar + 0.5
    first = 1.0 + 0.75 * beta * action - 51.0 / 64.0 * beta**2 * action**2
    second = 0.75 * beta - 51.0 / 32.0 * beta**2 * action
    third = -51.0 / 32.0 * beta**2
    hierarchical = (
        abs(first) >= HIERARCHY_FACTOR * abs(second)
        and abs(second) >= HIERARCHY_FACTOR * abs(third)
    )
    return EnergyDerivatives(
        n_bar=n_bar,
        beta=beta,
        first=first,
        second=second,
        third=third,
        hierarchical=hierarchical,
    )


def model_report(model: EnvelopeModel) -> dict[str, float | str | bool]:
    """Flat summary of a model, in report order."""
    derivatives = energy_derivatives(model.n_bar, model.beta)
    return {
        "beta": model.beta,
        "d": model.displacement,
        "gamma": model.gamma,
        "n_bar": model.n_bar,
        "b0": model.b0,
        "b1": model.b1,
        "b2": model.b2,
        "T_osc": model.t_osc,
        "T_r": model.t_r,
        "T_c": model.t_c,
        "sigma": model.sigma,
        "order": model.order.value,
        "blur_ratio": model.blur_ratio,
        "collapse_revival_ratio": model.collapse_revival_ratio,
        "valid": model.valid,
        "dE_dn": derivatives.first,
        "d2E_dn2": derivatives.second,
        "d3E_dn3": derivatives.third,
        "hierarchical": derivatives.hierarchical,
    }
