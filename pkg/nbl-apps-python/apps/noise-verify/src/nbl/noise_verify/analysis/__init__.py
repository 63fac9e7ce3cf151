# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

"""Statistical and exhaustive checks of the verification schemes."""

from .continuum import ContinuumReport, RateRow, continuum_report
from .montecarlo import (
    TrialReport,
    hash_collision_rate,
    mc_error_rate,
    pair_collision_rate,
)
from .oracle import (
    OracleReport,
    OracleResult,
    exhaustive_gf2,
    exhaustive_oracle,
    gf2_baseline,
    oracle_report,
)
from .orthogonality import OrthogonalityReport, OrthogonalityRow, orthogonality_suite
from .reports import FORMATS, csv_rows, render, render_text
from .scenario import ScenarioReport, scenario_report

__all__ = [
    "FORMATS",
    "ContinuumReport",
    "OracleReport",
    "OracleResult",
    "OrthogonalityReport",
    "OrthogonalityRow",
    "RateRow",
    "ScenarioReport",
    "TrialReport",
    "continuum_report",
    "csv_rows",
    "exhaustive_gf2",
    "exhaustive_oracle",
    "gf2_baseline",
    "hash_collision_rate",
    "mc_error_rate",
    "oracle_report",
    "orthogonality_suite",
    "pair_collision_rate",
    "render",
    "render_text",
    "scenario_report",
]
