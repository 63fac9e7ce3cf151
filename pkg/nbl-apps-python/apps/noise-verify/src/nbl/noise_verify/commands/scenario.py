# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

from typing import Optional

import click

from ..analysis.reports import Format
from ..analysis.scenario import scenario_report
from ..config import CliConfig
from .options import echo_report, format_option

click_name = "scenario"
click_help_text = "Compare the protocol's transfer time with sending the whole string."
click_setup = [
    click.option(
        "--L",
        "L",
        required=True,
        type=click.FloatRange(min=1),
        help="String length in bits, e.g. 1e12.",
    ),
    click.option(
        "--rate",
        required=True,
        type=click.FloatRange(min=0, min_open=True),
        help="Channel rate in bit/s.",
    ),
    click.option("--epsilon", required=True, type=float, help="Error bound in (0, 1)."),
    format_option,
]


def click_command(L: float, rate: float, epsilon: float, fmt: Optional[Format]) -> None:
    config = CliConfig.from_options(format=fmt)
    echo_report(scenario_report(round(L), rate, epsilon), config.format)
