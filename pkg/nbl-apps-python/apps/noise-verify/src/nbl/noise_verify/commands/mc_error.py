# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

from typing import Optional

import click

from ..analysis.montecarlo import Engine, mc_error_rate
from ..analysis.reports import Format
from ..config import CliConfig
from .options import echo_report, format_option, rng_seed_option

click_name = "mc-error"
click_help_text = (
    "Estimate the false-accept rate of the protocol with fresh seeds per trial. "
    "Exits with 1 if the rate is outside 3 sigma of 2^-k."
)
click_setup = [
    click.option("--k", "k", required=True, type=click.IntRange(min=1)),
    click.option("--L", "L", required=True, type=click.IntRange(min=1), help="String length."),
    click.option("--trials", type=click.IntRange(min=1), default=100_000, show_default=True),
    click.option(
        "--equal",
        is_flag=True,
        default=False,
        help="Give both parties the same string; every verdict must be equal.",
    ),
    click.option(
        "--engine",
        type=click.Choice(["batch", "session"]),
        default="batch",
        show_default=True,
        help="Vectorised fingerprints or one full protocol session per trial.",
    ),
    rng_seed_option,
    format_option,
]


def click_command(
    k: int,
    L: int,
    trials: int,
    equal: bool,
    engine: Engine,
    rng_seed: Optional[int],
    fmt: Optional[Format],
) -> int:
    report = mc_error_rate(k, L, trials, unequal=not equal, rng=rng_seed, engine=engine)
    echo_report(report, CliConfig.from_options(format=fmt).format)
    return 0 if report.passed else 1
