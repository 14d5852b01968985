"""CSV and key-value report output."""

from __future__ import annotations

import csv
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np
from numpy.typing import NDArray

from . import __version__
from .constants import CSV_DIGITS, REPORT_DIGITS
from .exceptions import ParameterError
from .services.dynamics import TimeSeries
from .services.spectrum import SpectrumTable

__all__ = ["CsvTable", "format_report", "format_value"]

Scalar = str | float | int | bool
"""Value that can appear in a preamble or report."""


def format_value(value: Scalar, digits: int = CSV_DIGITS) -> str:
    """Render a value with a fixed float format.

    Floats use ``digits`` significant digits, so 17 digits round-trip.
    """
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{digits}g}"
    return str(value)


@dataclass
class CsvTable:
    """Named columns of equal length plus a ``#`` comment preamble."""

    columns: dict[str, NDArray[np.float64]]
    """Column name to values, in output order."""

    preamble: dict[str, Scalar] = field(default_factory=dict)
    """Provenance written as ``# key: value`` lines before the header."""

    def __post_init__(self) -> None:
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ParameterError("CSV columns must have equal lengths")

    @classmethod
    def from_time_series(cls, series: TimeSeries) -> CsvTable:
        """Build a ``t,x,p`` table from a time series."""
        preamble: dict[str, Scalar] = {"tool": f"revivalsim {__version__}"}
        preamble.update(series.metadata)
        preamble["provenance"] = series.provenance.value
        return cls(
            columns={"t": series.times, "x": series.x, "p": series.p},
            preamble=preamble,
        )

    @classmethod
    def from_spectrum(
        cls, table: SpectrumTable, count: int | None = None
    ) -> CsvTable:
        """Build an ``n,E`` table from the first ``count`` levels."""
        levels = table.levels[:count]
        preamble: dict[str, Scalar] = {
            "tool": f"revivalsim {__version__}",
            "method": table.label,
            "beta": table.beta,
            "valid_up_to": table.valid_up_to,
        }
        if table.basis_size is not None:
            preamble["basis"] = table.basis_size
        return cls(
            columns={
                "n": np.arange(len(levels), dtype=np.float64),
                "E": levels,
            },
            preamble=preamble,
        )

    def write(self, stream: TextIO) -> None:
        """Write the preamble, header and rows to ``stream``."""
        for key, value in self.preamble.items():
            stream.write(f"# {key}: {format_value(value)}\n")
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(self.columns.keys())
        for row in zip(*self.columns.values()):
            writer.writerow(format_value(float(v)) for v in row)


def format_report(report: Mapping[str, Scalar]) -> str:
    """Render a flat ``key=value`` report, one entry per line."""
    return "".join(
        f"{key}={format_value(value, REPORT_DIGITS)}\n"
        for key, value in report.items()
    )
