"""Command-line interface for revivalsim.

Exit status is 0 on success, 2 for invalid usage or parameters and 3 when
a calculation cannot be carried out (basis too small, eigensolver failure).
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from typing import Any, TextIO

import numpy as np
import structlog
from pydantic import ValidationError
from safir.logging import configure_logging

from . import __version__
from .config import config
from .exceptions import (
    ParameterError,
    RevivalSimError,
    TruncationError,
    UnknownPresetError,
)
from .models import BetaOrder, ModelParams
from .output import CsvTable, Scalar, format_report
from .presets import (
    available_presets,
    load_experiment,
    load_preset,
    load_scenario,
    scenario_parameters,
)
from .services.dynamics import (
    ExactPropagator,
    coherent_state,
    default_truncation,
    expectation_series,
)
from .services.envelope import build_model, envelope_value, model_report
from .services.experiments import experiment_report
from .services.spectrum import compare_methods, required_basis, spectrum_table
from .services.timegrid import time_grid

__all__ = ["build_parser", "main"]

PROG = "revival-sim"
"""Program name used in usage and error messages."""

USAGE_ERROR = 2
"""Exit status for invalid usage or parameters."""

NUMERIC_ERROR = 3
"""Exit status for calculations that cannot be carried out."""

Handler = Callable[[argparse.Namespace], int]


def main(argv: list[str] | None = None) -> int:
    """Run the command line and return the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else USAGE_ERROR

    _configure_logging(args.log_level)
    handler: Handler = args.handler
    try:
        return handler(args)
    except (ValidationError, ParameterError, UnknownPresetError) as e:
        return _fail(e, USAGE_ERROR)
    except RevivalSimError as e:
        return _fail(e, NUMERIC_ERROR)


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with all subcommands."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--threads",
        type=int,
        default=None,
        help="worker threads for time series (default REVIVAL_SIM_THREADS)",
    )
    common.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default=None,
        help="log level (default SAFIR_LOG_LEVEL)",
    )

    parser = argparse.ArgumentParser(
        prog=PROG,
        description=(
            "Collapse and revival of a displaced ground state in a weakly"
            " anharmonic oscillator."
        ),
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    spectrum = subparsers.add_parser(
        "spectrum", parents=[common], help="energy levels as CSV"
    )
    spectrum.add_argument("--beta", type=float, required=True)
    spectrum.add_argument(
        "--levels", "--n", dest="levels", type=int, default=10
    )
    spectrum.add_argument(
        "--method",
        choices=["wkb", "pt1", "pt2", "exact", "all"],
        default="wkb",
    )
    spectrum.add_argument(
        "--basis", type=int, default=None, help="Fock basis for exact levels"
    )
    spectrum.add_argument("--output", default=None, help="CSV path")
    spectrum.set_defaults(handler=cmd_spectrum)

    evolve = subparsers.add_parser(
        "evolve", parents=[common], help="⟨x(t)⟩ and ⟨p(t)⟩ as CSV"
    )
    source = evolve.add_mutually_exclusive_group()
    source.add_argument(
        "--preset", choices=available_presets("scenarios"), default=None
    )
    source.add_argument("--config", default=None, help="scenario file")
    evolve.add_argument("--beta", type=float, default=None)
    evolve.add_argument(
        "--d", "--displacement", dest="displacement", type=float, default=None
    )
    evolve.add_argument("--truncation", type=int, default=None)
    evolve.add_argument("--t-end", type=float, default=None)
    evolve.add_argument("--span-revivals", type=float, default=None)
    evolve.add_argument("--samples", type=int, default=None)
    evolve.add_argument("--samples-per-period", type=int, default=None)
    evolve.add_argument(
        "--method", choices=["wkb", "pt1", "pt2", "exact"], default=None
    )
    evolve.add_argument(
        "--order", choices=[o.value for o in BetaOrder], default=None
    )
    evolve.add_argument(
        "--no-envelope",
        dest="envelope",
        action="store_const",
        const=False,
        default=None,
    )
    evolve.add_argument(
        "--no-exact",
        dest="exact",
        action="store_const",
        const=False,
        default=None,
    )
    evolve.add_argument(
        "--basis", type=int, default=None, help="diagonalization basis"
    )
    evolve.add_argument("--output", default=None, help="CSV path")
    evolve.set_defaults(handler=cmd_evolve)

    experiment = subparsers.add_parser(
        "experiment", parents=[common], help="cold-atom parameter report"
    )
    experiment.add_argument("preset", nargs="?", default=None)
    experiment.add_argument("--spec", default=None, help="experiment file")
    experiment.set_defaults(handler=cmd_experiment)

    report = subparsers.add_parser(
        "envelope-report", parents=[common], help="envelope time scales"
    )
    report.add_argument(
        "--preset", choices=available_presets("scenarios"), default=None
    )
    report.add_argument("--beta", type=float, default=None)
    report.add_argument(
        "--d", "--displacement", dest="displacement", type=float, default=None
    )
    report.add_argument(
        "--order", choices=[o.value for o in BetaOrder], default=None
    )
    report.set_defaults(handler=cmd_envelope_report)
    return parser


def cmd_spectrum(args: argparse.Namespace) -> int:
    """Write levels from one method, or all methods with their errors."""
    levels: int = args.levels
    if levels < 1:
        raise ParameterError(f"At least one level required, got {levels}")
    preamble: dict[str, Scalar] = {
        "tool": f"{PROG} {__version__}",
        "beta": args.beta,
        "levels": levels,
        "method": args.method,
    }
    n = np.arange(levels, dtype=np.float64)
    columns = {"n": n}

    if args.method == "all":
        # One extra level so that every row has a spacing.
        comparison = compare_methods(args.beta, levels + 1, args.basis)
        for method in ("wkb", "pt1", "pt2", "exact"):
            columns[f"E_{method}"] = getattr(comparison, method)[:levels]
        for method in ("wkb", "pt1", "pt2"):
            columns[f"abs_err_{method}"] = comparison.level_error(method)[
                :levels
            ]
        for method in ("wkb", "pt1", "pt2"):
            columns[f"gap_err_{method}"] = comparison.gap_error(method)
        if comparison.basis_size is not None:
            preamble["basis"] = comparison.basis_size
        output = CsvTable(columns=columns, preamble=preamble)
    else:
        required = required_basis(levels)
        if args.method == "exact" and (args.basis or required) < required:
            raise TruncationError(
                "Diagonalization basis", args.basis, required
            )
        table = spectrum_table(
            args.method, args.beta, levels, basis_size=args.basis
        )
        output = CsvTable.from_spectrum(table, levels)
        output.preamble["tool"] = preamble["tool"]
        output.preamble["levels"] = levels

    with _open_output(args.output) as stream:
        output.write(stream)
    return 0


def cmd_evolve(args: argparse.Namespace) -> int:
    """Write the exact, series and envelope time series of a scenario."""
    overrides: dict[str, Any] = {
        key: getattr(args, key)
        for key in (
            "beta",
            "displacement",
            "truncation",
            "t_end",
            "span_revivals",
            "samples",
            "samples_per_period",
            "method",
            "order",
            "envelope",
            "exact",
            "output",
        )
    }
    scenario = load_scenario(args.preset, args.config, overrides)
    if args.span_revivals is not None and args.t_end is None:
        scenario = scenario.model_copy(update={"t_end": None})
    beta, displacement = scenario_parameters(scenario)
    ModelParams(beta=beta, displacement=displacement)

    # An explicit t_end takes precedence over a span in revival times.
    model = None
    if scenario.envelope or scenario.t_end is None:
        model = build_model(beta, abs(displacement), scenario.order)
    if scenario.t_end is not None:
        t_end = scenario.t_end
    elif model is not None and scenario.span_revivals is not None:
        t_end = scenario.span_revivals * model.t_r
    else:
        raise ParameterError("t_end or span_revivals required")
    times = time_grid(
        t_end,
        samples=scenario.samples,
        samples_per_period=scenario.samples_per_period,
    )
    truncation = scenario.truncation or default_truncation(displacement)
    logger = structlog.get_logger(config.logger_name)
    logger.info(
        "Evolving",
        beta=beta,
        displacement=displacement,
        truncation=truncation,
        samples=len(times),
    )

    threads = args.threads
    columns = {"t": times}
    provenance = []
    preamble: dict[str, Scalar] = {
        "tool": f"{PROG} {__version__}",
        "beta": beta,
        "d": displacement,
        "N": truncation,
        "method": scenario.method,
    }
    if scenario.exact:
        propagator = ExactPropagator(
            beta, displacement, truncation, basis_size=args.basis
        )
        exact = propagator.expectation(times, threads=threads)
        columns["x_exact"] = exact.x
        columns["p_exact"] = exact.p
        provenance.append(exact.provenance.value)
        preamble["basis"] = propagator.basis_size

    state = coherent_state(abs(displacement), truncation)
    spectrum = spectrum_table(scenario.method, beta, truncation)
    series = expectation_series(state, spectrum, times, threads=threads)
    if displacement < 0:
        series = series.negated()
    columns["x_series"] = series.x
    columns["p_series"] = series.p
    provenance.append(series.provenance.value)

    if scenario.envelope and model is not None:
        envelope = np.asarray(envelope_value(model, times))
        columns["x_env_hi"] = envelope
        columns["x_env_lo"] = -envelope
        provenance.append("envelope")
        preamble["order"] = model.order.value
        preamble["T_r"] = model.t_r
        preamble["T_c"] = model.t_c
    preamble["provenance"] = " ".join(provenance)

    with _open_output(scenario.output) as stream:
        CsvTable(columns=columns, preamble=preamble).write(stream)
    return 0


def cmd_experiment(args: argparse.Namespace) -> int:
    """Print the report for an experiment preset or file."""
    if args.preset is not None and args.spec is not None:
        raise ParameterError("Give either a preset or --spec, not both")
    data = load_experiment(args.preset, args.spec)
    sys.stdout.write(format_report(experiment_report(data)))
    return 0


def cmd_envelope_report(args: argparse.Namespace) -> int:
    """Print the envelope model for β and d."""
    data: dict[str, Any] = {}
    if args.preset is not None:
        data = load_preset("scenarios", args.preset)
    for key in ("beta", "displacement", "order"):
        if getattr(args, key) is not None:
            data[key] = getattr(args, key)
    data.setdefault("span_revivals", 1.0)
    scenario = load_scenario(overrides=data)
    beta, displacement = scenario_parameters(scenario)
    ModelParams(beta=beta, displacement=displacement)
    model = build_model(beta, abs(displacement), scenario.order)
    sys.stdout.write(format_report(model_report(model)))
    return 0


def _configure_logging(log_level: str | None) -> None:
    """Configure logging and send it to stderr, keeping stdout for data."""
    configure_logging(
        profile=config.profile,
        log_level=log_level or config.log_level,
        name=config.logger_name,
    )
    for handler in logging.getLogger(config.logger_name).handlers:
        if isinstance(handler, logging.StreamHandler):
            handler.setStream(sys.stderr)


def _fail(error: Exception, status: int) -> int:
    sys.stderr.write(f"{PROG}: error: {error}\n")
    return status


@contextmanager
def _open_output(path: str | None) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="") as stream:
        yield stream
