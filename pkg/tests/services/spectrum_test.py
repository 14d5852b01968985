"""Tests for the revivalsim.services.spectrum module."""

from __future__ import annotations

import math

import numpy as np
import pytest

from revivalsim.exceptions import AboveBarrierError, ParameterError
from revivalsim.models import SpectrumMethod
from revivalsim.services.spectrum import (
    action_of_energy_quadrature,
    action_of_energy_series,
    barrier_energy,
    compare_methods,
    diagonalize,
    energy_of_action,
    exact_spectrum,
    momentum_operator,
    perturbation_level,
    perturbation_levels,
    position_operator,
    required_basis,
    spectrum_table,
    turning_point,
    valid_index,
    well_level_count,
    wkb_level,
    wkb_levels,
)


def test_harmonic_levels() -> None:
    expected = np.arange(20) + 0.5
    assert np.array_equal(wkb_levels(20, 0.0), expected)
    np.testing.assert_allclose(
        perturbation_levels(20, 0.0), expected, rtol=0, atol=1e-14
    )
    exact = exact_spectrum(0.0, 40)
    np.testing.assert_allclose(
        exact.levels[:20], expected, rtol=0, atol=1e-12
    )
    assert wkb_level(0, 0.0) == 0.5


def test_action_series() -> None:
    assert action_of_energy_series(10.0, 1e-4) == pytest.approx(
        9.99625546875, rel=1e-14
    )
    assert action_of_energy_series(10.0, 0.0) == 10.0


def test_action_quadrature() -> None:
    assert action_of_energy_quadrature(7.0, 0.0) == pytest.approx(
        7.0, rel=1e-13
    )
    quadrature = action_of_energy_quadrature(10.0, 1e-4)
    assert quadrature == pytest.approx(9.99625546875, abs=2e-8)

    # The series is accurate to second order in β, so halving β divides
    # the remaining deviation by about eight.
    deviations = [
        action_of_energy_quadrature(10.0, beta)
        - action_of_energy_series(10.0, beta)
        for beta in (5e-3, 2.5e-3, 1.25e-3)
    ]
    for larger, smaller in zip(deviations, deviations[1:]):
        assert 7.0 < larger / smaller < 9.0


@pytest.mark.parametrize("beta", [1e-4, 1e-3, 1e-2])
@pytest.mark.parametrize("energy", [1.0, 5.0, 10.0])
def test_action_quadrature_scaling(beta: float, energy: float) -> None:
    quadrature = action_of_energy_quadrature(energy, beta)
    series = action_of_energy_series(energy, beta)
    coefficient = abs(quadrature - series) / (beta**3 * energy**4)
    assert 0.5 < coefficient < 2.0


def test_action_negative_beta() -> None:
    series = action_of_energy_series(2.0, -1e-3)
    quadrature = action_of_energy_quadrature(2.0, -1e-3)
    assert quadrature == pytest.approx(series, abs=1e-7)
    assert quadrature > 2.0


def test_energy_of_action() -> None:
    action = action_of_energy_series(10.0, 1e-4)
    assert energy_of_action(action, 1e-4) == pytest.approx(10.0, abs=1e-7)
    assert energy_of_action(10.5, 1e-4) == pytest.approx(wkb_level(10, 1e-4))
    with pytest.raises(ParameterError):
        energy_of_action(0.0, 1e-4)


def test_turning_point() -> None:
    for beta in (0.0, 1e-4, 0.2, -0.01):
        tp = turning_point(5.0, beta)
        assert tp.residual < 1e-12
    assert turning_point(2.0, 0.0).amplitude == pytest.approx(2.0)

    with pytest.raises(ParameterError):
        turning_point(-1.0, 1e-4)
    with pytest.raises(AboveBarrierError) as excinfo:
        turning_point(25.0, -0.01)
    assert excinfo.value.barrier == pytest.approx(25.0)
    assert barrier_energy(0.01) == math.inf


def test_operators() -> None:
    x = position_operator(12)
    p = momentum_operator(12)
    assert x[3, 4] == pytest.approx(math.sqrt(2.0))
    assert p[4, 3] == pytest.approx(1j * math.sqrt(2.0))
    commutator = x @ p - p @ x
    np.testing.assert_allclose(
        commutator[:11, :11], 1j * np.eye(11), rtol=0, atol=1e-14
    )


def test_perturbation() -> None:
    lam = 0.01 / 4
    assert perturbation_level(0, 0.01, 1) == pytest.approx(
        0.5 + 0.75 * lam, rel=1e-14
    )
    assert perturbation_level(0, 0.01) == pytest.approx(
        0.5 + 0.75 * lam - 21.0 / 8.0 * lam**2, rel=1e-14
    )
    n = np.arange(15, dtype=np.float64)
    second = -(lam**2) / 8.0 * (34 * n**3 + 51 * n**2 + 59 * n + 21)
    first = 0.75 * lam * (2 * n**2 + 2 * n + 1)
    np.testing.assert_allclose(
        perturbation_levels(15, 0.01),
        n + 0.5 + first + second,
        rtol=1e-13,
    )
    with pytest.raises(ParameterError):
        perturbation_levels(5, 0.01, order=3)


def test_guard() -> None:
    assert valid_index(400) == 320
    assert valid_index(20) == 2
    assert valid_index(100, guard_factor=2.0, guard_floor=5) == 80
    assert valid_index(5) == -1
    basis = required_basis(60)
    assert valid_index(basis) >= 59
    assert valid_index(basis - 1) < 59


def test_wkb_against_exact() -> None:
    beta = 1e-4
    exact = exact_spectrum(beta, 120)
    wkb = wkb_levels(12, beta)

    # Spacings agree; absolute levels are offset by 3β/32.
    gap_wkb = wkb[11] - wkb[10]
    gap_exact = exact.levels[11] - exact.levels[10]
    assert abs(gap_wkb - gap_exact) < 5e-9
    offset = exact.levels[10] - wkb[10]
    assert offset == pytest.approx(3 * beta / 32, abs=5e-8)


def test_method_crossover() -> None:
    comparison = compare_methods(1e-4, 32, basis_size=400)
    wkb = comparison.gap_error("wkb")
    pt1 = comparison.gap_error("pt1")
    pt2 = comparison.gap_error("pt2")
    for n in range(5, 31):
        assert wkb[n] < pt1[n]
    for n in range(12, 31):
        assert wkb[n] < pt2[n]
    assert comparison.level_error("pt2")[10] < comparison.level_error(
        "wkb"
    )[10]


def test_spectrum_table() -> None:
    table = spectrum_table("pt2", 1e-3, 10)
    assert table.method is SpectrumMethod.PERTURBATION
    assert table.label == "pt2"
    assert table.valid_up_to == 9
    assert len(table.gaps()) == 9

    exact = spectrum_table("exact", 1e-3, 10)
    assert exact.label == "exact"
    assert exact.basis_size == required_basis(10)
    assert exact.valid_up_to >= 9

    with pytest.raises(ParameterError):
        spectrum_table("dmrg", 1e-3, 10)
    with pytest.raises(ParameterError):
        spectrum_table("wkb", 0.6, 10)
    with pytest.raises(ParameterError):
        spectrum_table("wkb", 1e-3, 0)


def test_negative_beta() -> None:
    beta = -0.01
    levels, vectors, top = diagonalize(beta, 60)
    assert top >= 5
    well = levels[: top + 1]
    assert np.all(np.diff(well) > 0)
    assert np.all(well < barrier_energy(beta))
    assert levels[0] == pytest.approx(
        perturbation_level(0, beta), abs=1e-6
    )
    np.testing.assert_allclose(
        vectors.T @ vectors, np.eye(60), rtol=0, atol=1e-10
    )

    assert well_level_count(beta) == 30
    assert well_level_count(-0.0398) == 8
    assert well_level_count(0.01) is None

    # Series levels stop being trustworthy at the barrier.
    table = spectrum_table("wkb", -0.05, 40)
    assert table.valid_up_to < 39
    assert np.all(table.levels[: table.valid_up_to + 1] < 5.0)


def test_exact_convergence_at_lattice_beta() -> None:
    small = exact_spectrum(0.0398, 400)
    large = exact_spectrum(0.0398, 600)
    assert small.valid_up_to >= 50
    np.testing.assert_allclose(
        small.levels[:51], large.levels[:51], rtol=0, atol=1e-9
    )


def test_exact_cutoff_tracks_convergence() -> None:
    beta = 0.0398
    table = exact_spectrum(beta, 195)
    top = table.valid_up_to
    assert 40 <= top < 101
    reference = exact_spectrum(beta, 600)
    np.testing.assert_allclose(
        table.levels[: top + 1], reference.levels[: top + 1], rtol=1e-8
    )

    configured = exact_spectrum(0.0, 100, guard_factor=2.0, guard_floor=5)
    assert configured.valid_up_to == 80


def test_exact_spectrum_grows_basis() -> None:
    table = spectrum_table("exact", 0.0398, 140)
    assert table.valid_up_to >= 139
    assert table.basis_size is not None
    assert table.basis_size > required_basis(140)
    reference = exact_spectrum(0.0398, 3 * table.basis_size)
    np.testing.assert_allclose(
        table.levels[:140], reference.levels[:140], rtol=1e-8
    )


@pytest.mark.parametrize("beta", [0.0, 1e-4, 1e-2, 0.0398])
def test_exact_levels_increase(beta: float) -> None:
    table = spectrum_table("exact", beta, 120)
    top = table.valid_up_to
    assert top >= 119
    gaps = np.diff(table.levels[: top + 1])
    assert np.all(gaps > 0)
    if beta > 0:
        assert np.all(np.diff(gaps) > 0)
