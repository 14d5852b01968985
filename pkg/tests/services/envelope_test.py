"""Tests for the revivalsim.services.envelope module."""

from __future__ import annotations

import math

import numpy as np
import pytest

from revivalsim.exceptions import ParameterError
from revivalsim.models import BetaOrder, EnvelopeModel, Provenance
from revivalsim.services.envelope import (
    analytic_xp,
    build_model,
    energy_derivatives,
    envelope_value,
    gap,
    gaussian_gap_sum,
    model_report,
)
from revivalsim.services.spectrum import wkb_levels


def test_gap() -> None:
    assert gap(0, 0.0) == 1.0
    expected = 1.0 + 0.75e-4 * 9 - 1e-8 * (51.0 + 12.75 + 221.0 / 256.0)
    assert gap(8, 1e-4) == pytest.approx(expected, rel=1e-14)

    beta = 0.0398
    differences = np.diff(wkb_levels(52, beta))
    for n in range(51):
        assert gap(n, beta) == pytest.approx(differences[n], abs=1e-12)

    with pytest.raises(ParameterError):
        gap(-1, 1e-4)


def test_leading_order(revival_model: EnvelopeModel) -> None:
    assert revival_model.order is BetaOrder.LEADING
    assert revival_model.t_r == pytest.approx(83775.8, rel=1e-6)
    assert revival_model.t_r == pytest.approx(2 * math.pi / revival_model.b1)
    assert revival_model.t_c == pytest.approx(6666.67, rel=1e-5)
    assert revival_model.sigma == pytest.approx(4714.05, rel=1e-5)
    assert 1.0 / revival_model.sigma == pytest.approx(0.75 * 1e-4 * 2**1.5)
    assert revival_model.b0 == pytest.approx(1.0 + 0.75e-4 * 9)
    assert revival_model.t_osc == pytest.approx(2 * math.pi / revival_model.b0)
    assert revival_model.n_bar == pytest.approx(8.0)
    assert revival_model.valid


def test_second_order(
    revival_model: EnvelopeModel, revival_second_order: EnvelopeModel
) -> None:
    model = revival_second_order
    assert model.order is BetaOrder.SECOND
    assert model.t_r == pytest.approx(83775.8 * (1 + 1.9125e-3), rel=1e-6)
    assert model.b0 == pytest.approx(gap(8.0, 1e-4), rel=1e-15)
    assert model.b1 == pytest.approx(3 / 32 * (8e-4 - 17e-8 * 9))
    assert model.b2 == pytest.approx(-51 / 64 * 1e-8)

    shift = model.t_r - revival_model.t_r
    assert shift == pytest.approx(17 * math.pi / 3 * 9, rel=1e-9)


@pytest.mark.parametrize("order", list(BetaOrder))
def test_time_scale_ratio(order: BetaOrder) -> None:
    for beta, d in ((1e-4, 4.0), (0.0398, 1.61), (-0.0398, 1.61)):
        model = build_model(beta, d, order)
        assert model.t_r / model.t_c == pytest.approx(math.pi * d, rel=1e-12)
        assert model.t_c == pytest.approx(math.sqrt(2) * model.sigma)


def test_lattice_values() -> None:
    model = build_model(0.0398, 1.61)
    assert model.t_r == pytest.approx(210.3, rel=0.01)
    assert model.t_c == pytest.approx(41.67, rel=0.01)
    assert model.t_osc == pytest.approx(2 * math.pi / model.b0)


def test_negative_beta() -> None:
    model = build_model(-0.0398, 1.61)
    reference = build_model(0.0398, 1.61)
    assert model.t_r == pytest.approx(reference.t_r)
    assert model.b1 < 0
    assert model.b0 < 1.0


def test_validity() -> None:
    model = build_model(1e-4, 0.5)
    assert model.collapse_revival_ratio == pytest.approx(2 / math.pi)
    assert not model.valid


def test_invalid_model() -> None:
    with pytest.raises(ParameterError, match="anharmonicity"):
        build_model(0.0, 4.0)
    with pytest.raises(ParameterError):
        build_model(0.6, 4.0)
    with pytest.raises(ParameterError):
        build_model(1e-4, 0.0)
    with pytest.raises(ParameterError):
        build_model(1e-4, -1.0)


def test_envelope_value(revival_model: EnvelopeModel) -> None:
    assert envelope_value(revival_model, 0.0) == pytest.approx(4.0, rel=1e-12)
    assert envelope_value(revival_model, revival_model.t_c) == pytest.approx(
        4.0 / math.e, abs=4e-9
    )
    assert envelope_value(revival_model, revival_model.t_r) == pytest.approx(
        4.0, rel=1e-9
    )
    midpoint = envelope_value(revival_model, 0.5 * revival_model.t_r)
    assert isinstance(midpoint, float)
    assert midpoint < 1e-10

    values = envelope_value(revival_model, [0.0, 2 * revival_model.t_r])
    assert isinstance(values, np.ndarray)
    np.testing.assert_allclose(values, [4.0, 4.0], rtol=1e-9)

    with pytest.raises(ParameterError):
        envelope_value(revival_model, -1.0)


def test_analytic_xp(revival_model: EnvelopeModel) -> None:
    result = analytic_xp(revival_model, [0.0, 1.0])
    assert result.provenance is Provenance.ENVELOPE
    assert result.x[0] == pytest.approx(4.0)
    assert result.p[0] == 0.0

    model = build_model(1e-5, 4.0)
    times = np.linspace(0.0, 100.0, 501)
    result = analytic_xp(model, times)
    carrier = times * (1.0 + 7.5e-6 * 9)
    np.testing.assert_allclose(result.x, 4 * np.cos(carrier), atol=1e-4)
    np.testing.assert_allclose(result.p, -4 * np.sin(carrier), atol=1e-4)


def test_gaussian_gap_sum(revival_model: EnvelopeModel) -> None:
    times = np.arange(0.0, 1.2 * revival_model.t_r, 3.1)
    summed = gaussian_gap_sum(revival_model, times, threads=2)
    closed = analytic_xp(revival_model, times)
    assert summed.provenance is Provenance.GAUSSIAN_GAP_SUM
    assert summed.x[0] == pytest.approx(4.0, rel=5e-3)
    assert np.max(np.abs(summed.x - closed.x)) < 0.02
    assert np.max(np.abs(summed.p - closed.p)) < 0.02


def test_second_order_blur() -> None:
    # Large β and d make the quadratic term visibly lower the revival.
    leading = build_model(0.01, 6.0, BetaOrder.LEADING)
    second = build_model(0.01, 6.0, BetaOrder.SECOND)
    assert second.blur_ratio > leading.blur_ratio
    times = np.linspace(0.0, 2 * math.pi / second.b1 * 1.05, 4001)
    peak = np.max(np.abs(gaussian_gap_sum(second, times).x[2000:]))
    assert peak < 0.98 * np.max(
        np.abs(gaussian_gap_sum(leading, times).x[2000:])
    )


def test_energy_derivatives() -> None:
    derivatives = energy_derivatives(8.0, 1e-4)
    assert derivatives.first == pytest.approx(
        1 + 0.75e-4 * 8.5 - 51 / 64 * 1e-8 * 8.5**2
    )
    assert derivatives.second == pytest.approx(0.75e-4 - 51 / 32 * 1e-8 * 8.5)
    assert derivatives.third == pytest.approx(-51 / 32 * 1e-8)
    assert derivatives.hierarchical

    assert not energy_derivatives(8.0, 0.3).hierarchical


def test_model_report(revival_model: EnvelopeModel) -> None:
    report = model_report(revival_model)
    assert list(report)[:13] == [
        "beta",
        "d",
        "gamma",
        "n_bar",
        "b0",
        "b1",
        "b2",
        "T_osc",
        "T_r",
        "T_c",
        "sigma",
        "order",
        "blur_ratio",
    ]
    assert report["order"] == "leading"
    assert report["T_r"] == revival_model.t_r
    assert report["valid"] is True
    assert report["hierarchical"] is True
