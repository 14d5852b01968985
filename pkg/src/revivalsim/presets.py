"""Loading of shipped presets and user parameter files.

Presets are flat TOML files under ``revivalsim/data``: experiments in
``data/experiments`` and ``evolve`` scenarios in ``data/scenarios``.
"""

from __future__ import annotations

import tomllib
from importlib.resources import files
from pathlib import Path
from typing import Any

from .exceptions import ParameterError, UnknownPresetError
from .models import LatticeSpec, ScenarioConfig
from .services.experiments import lattice_derive

__all__ = [
    "available_presets",
    "load_experiment",
    "load_file",
    "load_preset",
    "load_scenario",
    "scenario_parameters",
]


def available_presets(kind: str) -> list[str]:
    """Names of the shipped presets of one kind, sorted.

    Parameters
    ----------
    kind
        Either ``experiments`` or ``scenarios``.
    """
    directory = files("revivalsim") / "data" / kind
    return sorted(
        entry.name.removesuffix(".toml")
        for entry in directory.iterdir()
        if entry.name.endswith(".toml")
    )


def load_preset(kind: str, name: str) -> dict[str, Any]:
    """Parse a shipped preset.

    Raises
    ------
    revivalsim.exceptions.UnknownPresetError
        No preset of that kind has this name.
    """
    available = available_presets(kind)
    if name not in available:
        raise UnknownPresetError(name, available)
    resource = files("revivalsim") / "data" / kind / f"{name}.toml"
    return tomllib.loads(resource.read_text(encoding="utf-8"))


def load_file(path: str | Path) -> dict[str, Any]:
    """Parse a user-supplied parameter file.

    Raises
    ------
    revivalsim.exceptions.ParameterError
        The file cannot be read or is not valid TOML.
    """
    try:
        with Path(path).open("rb") as f:
            return tomllib.load(f)
    except OSError as e:
        raise ParameterError(f"Cannot read {path}: {e.strerror}") from e
    except tomllib.TOMLDecodeError as e:
        raise ParameterError(f"Cannot parse {path}: {e}") from e


def load_experiment(
    name: str | None = None, path: str | Path | None = None
) -> dict[str, Any]:
    """Load an experiment description by preset name or from a file."""
    if path is not None:
        return load_file(path)
    if name is None:
        raise ParameterError("An experiment preset or spec file is required")
    return load_preset("experiments", name)


def load_scenario(
    name: str | None = None,
    path: str | Path | None = None,
    overrides: dict[str, Any] | None = None,
) -> ScenarioConfig:
    """Build a scenario from a preset or file plus command-line overrides.

    Overrides whose value is `None` are ignored.

    Raises
    ------
    pydantic.ValidationError
        The merged settings are invalid.
    """
    data: dict[str, Any] = {}
    if path is not None:
        data = load_file(path)
    elif name is not None:
        data = load_preset("scenarios", name)
    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value
    return ScenarioConfig(**data)


def scenario_parameters(scenario: ScenarioConfig) -> tuple[float, float]:
    """Anharmonicity and displacement for a scenario.

    A scenario that names a lattice preset takes d and the magnitude of β
    from the lattice well; explicit ``beta`` and ``displacement`` values
    still win.
    """
    beta = scenario.beta
    displacement = scenario.displacement
    if scenario.lattice is not None:
        data = load_preset("experiments", scenario.lattice)
        data.pop("kind", None)
        data.pop("omega_ext", None)
        data.pop("site_index", None)
        derived = lattice_derive(LatticeSpec(**data))
        if beta is None:
            beta = abs(derived.beta)
        if displacement is None:
            displacement = derived.d
    if beta is None or displacement is None:
        raise ParameterError("beta and displacement are required")
    return beta, displacement
