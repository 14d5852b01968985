"""Constants for revivalsim."""

from __future__ import annotations

HBAR = 1.054571817e-34
"""Reduced Planck constant in J·s (CODATA 2018)."""

RB87_MASS = 1.4432e-25
"""Mass of a rubidium-87 atom in kg, as used for the cold-atom estimates.

Pinned to four digits rather than looked up so that the quoted lattice and
trap numbers reproduce exactly.
"""

BETA_CAP = 0.5
"""Largest accepted magnitude of the dimensionless anharmonicity.

Beyond this the second-order expansions in β carry no information.
"""

BETA_WARNING = 0.1
"""Magnitude of β above which the small-anharmonicity regime is doubtful."""

ACTION_SERIES_WARNING = 0.2
"""Value of |β|·E above which the action series is flagged."""

TAIL_TOLERANCE = 1e-8
"""Largest probability allowed outside a truncated coherent state."""

COLLAPSE_REVIVAL_GATE = 0.2
"""Largest T_c/T_r for which the Gaussian-sum envelope is considered valid."""

BLUR_GATE = 0.1
"""Largest blur ratio |b2|·n̄·T_r/2π for which revivals count as sharp."""

HIERARCHY_FACTOR = 10.0
"""Factor by which successive energy derivatives must decrease."""

SAMPLES_PER_PERIOD = 40
"""Default number of time samples per classical period 2π."""

CSV_DIGITS = 17
"""Significant digits for floats in CSV output (round-trip safe)."""

REPORT_DIGITS = 10
"""Significant digits for floats in key-value reports."""
