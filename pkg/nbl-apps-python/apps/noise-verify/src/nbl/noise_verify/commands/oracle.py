# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

from typing import Optional

import click

from ..analysis.oracle import oracle_report
from ..analysis.reports import Format
from ..config import CliConfig
from .options import echo_report, format_option

click_name = "oracle"
click_help_text = (
    "Exact false-accept probabilities by enumerating every coin table, "
    "next to the GF(2) inner product baseline."
)
click_setup = [
    click.option("--L", "L", required=True, type=click.IntRange(min=1)),
    click.option("--k", "k", required=True, type=click.IntRange(min=1)),
    format_option,
]


def click_command(L: int, k: int, fmt: Optional[Format]) -> int:
    report = oracle_report(L, k)
    echo_report(report, CliConfig.from_options(format=fmt).format)
    return 0 if report.passed else 1
