"""Test fixtures for revivalsim tests."""

from __future__ import annotations

import numpy as np
import pytest
from numpy.typing import NDArray

from revivalsim.models import BetaOrder, EnvelopeModel, LatticeSpec
from revivalsim.services.dynamics import ExactPropagator, TimeSeries
from revivalsim.services.envelope import build_model

REVIVAL_BETA = 1e-4
REVIVAL_DISPLACEMENT = 4.0
REVIVAL_TRUNCATION = 60


@pytest.fixture
def lattice_35er() -> LatticeSpec:
    """Rb-87 in an 838 nm lattice, 35 recoil energies deep."""
    return LatticeSpec(depth=35.0, wavelength=838e-9, alpha=0.25)


@pytest.fixture(scope="session")
def revival_propagator() -> ExactPropagator:
    """Exact propagator for β = 1e-4, d = 4 with N = 60."""
    return ExactPropagator(
        REVIVAL_BETA, REVIVAL_DISPLACEMENT, REVIVAL_TRUNCATION
    )


@pytest.fixture(scope="session")
def revival_model() -> EnvelopeModel:
    return build_model(REVIVAL_BETA, REVIVAL_DISPLACEMENT, BetaOrder.LEADING)


@pytest.fixture(scope="session")
def revival_second_order() -> EnvelopeModel:
    return build_model(REVIVAL_BETA, REVIVAL_DISPLACEMENT, BetaOrder.SECOND)


@pytest.fixture(scope="session")
def revival_times(revival_model: EnvelopeModel) -> NDArray[np.float64]:
    """Times over 2.2 revivals, too coarse for the carrier but fine for the
    envelope."""
    return np.arange(0.0, 2.2 * revival_model.t_r, 1.3)


@pytest.fixture(scope="session")
def revival_exact(
    revival_propagator: ExactPropagator,
    revival_times: NDArray[np.float64],
) -> TimeSeries:
    return revival_propagator.expectation(revival_times, threads=2)
