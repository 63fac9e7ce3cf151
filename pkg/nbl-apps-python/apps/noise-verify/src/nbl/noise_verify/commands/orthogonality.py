# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

from pathlib import Path
from typing import Optional

import click

from ..analysis.orthogonality import MIN_SAMPLES, orthogonality_suite
from ..analysis.reports import Format
from ..config import CliConfig
from .options import echo_report, format_option, rng_seed_option, seed_file_option

click_name = "orthogonality"
click_help_text = "Estimate the orthogonality time averages of basis noises and RTW sequences."
click_setup = [
    click.option(
        "--n",
        "n",
        type=click.IntRange(min=MIN_SAMPLES),
        default=1_000_000,
        show_default=True,
        help="Number of samples per time average.",
    ),
    rng_seed_option,
    seed_file_option,
    format_option,
]


def click_command(
    n: int, rng_seed: Optional[int], seed_file: Optional[Path], fmt: Optional[Format]
) -> int:
    config = CliConfig.from_options(seed_file=seed_file, format=fmt)
    seed = config.harness_seed(rng_seed)
    report = orthogonality_suite(seed, n)
    echo_report(report, config.format)
    return 0 if report.passed else 1
