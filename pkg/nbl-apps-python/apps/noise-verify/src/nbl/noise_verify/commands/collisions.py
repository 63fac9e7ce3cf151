# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

from pathlib import Path
from typing import Optional

import click

from ..analysis.montecarlo import hash_collision_rate, pair_collision_rate
from ..analysis.reports import Format
from ..config import CliConfig
from .options import echo_report, format_option, open_input, rng_seed_option

click_name = "collisions"
click_help_text = (
    "Collision statistics of the keyed digest: random distinct inputs under one key, "
    "or one fixed pair of files (--pair) under fresh keys."
)
click_setup = [
    click.option("--k", "k", required=True, type=click.IntRange(min=1)),
    click.option(
        "--pairs",
        type=click.IntRange(min=1),
        default=100_000,
        show_default=True,
        help="Number of input pairs, or of fresh keys with --pair.",
    ),
    click.option(
        "--length",
        type=click.IntRange(min=1),
        default=8,
        show_default=True,
        help="Input length in bytes.",
    ),
    click.option(
        "--pair",
        nargs=2,
        type=click.Path(dir_okay=False, path_type=Path),
        default=None,
        help="Two files to compare under fresh keys.",
    ),
    rng_seed_option,
    format_option,
]


def click_command(
    k: int,
    pairs: int,
    length: int,
    pair: Optional[tuple[Path, Path]],
    rng_seed: Optional[int],
    fmt: Optional[Format],
) -> int:
    if pair:
        with open_input(pair[0]) as a, open_input(pair[1]) as b:
            report = pair_collision_rate(a.read(), b.read(), k, pairs, rng=rng_seed)
    else:
        report = hash_collision_rate(k, pairs, length, rng=rng_seed)
    echo_report(report, CliConfig.from_options(format=fmt).format)
    return 0 if report.passed else 1
