# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

from pathlib import Path
from typing import Optional

import click
from loguru import logger

from ..analysis.continuum import DEFAULT_CUTOFF, continuum_report
from ..analysis.reports import Format
from ..config import CliConfig
from ..continuum_logic import string_hyperspace_vector, write_signal_csv
from .options import echo_report, format_option, rng_seed_option, seed_file_option

click_name = "continuum"
click_help_text = (
    "Check the continuum comparators, detection times and the bandwidth of "
    "hyperspace products on sampled Gaussian noises."
)
click_setup = [
    click.option("--L", "L", type=click.IntRange(min=1), default=16, show_default=True),
    click.option(
        "--differing",
        type=click.IntRange(min=1),
        default=1,
        show_default=True,
        help="Number of positions in which the unequal string differs.",
    ),
    click.option(
        "--samples",
        type=click.IntRange(min=1000),
        default=1_000_000,
        show_default=True,
    ),
    click.option(
        "--cutoff",
        type=click.FloatRange(min=0, max=0.5, min_open=True, max_open=True),
        default=DEFAULT_CUTOFF,
        show_default=True,
        help="Low-pass cutoff as a fraction of the sample rate.",
    ),
    click.option(
        "--export",
        type=click.Path(dir_okay=False, path_type=Path),
        default=None,
        help=(
            "Write the hyperspace vector of the random string as tick,value CSV, "
            "scaled to a peak magnitude of 1."
        ),
    ),
    rng_seed_option,
    seed_file_option,
    format_option,
]


def click_command(
    L: int,
    differing: int,
    samples: int,
    cutoff: float,
    export: Optional[Path],
    rng_seed: Optional[int],
    seed_file: Optional[Path],
    fmt: Optional[Format],
) -> int:
    config = CliConfig.from_options(seed_file=seed_file, format=fmt)
    seed = config.harness_seed(rng_seed)
    report = continuum_report(
        L, samples, seed, rng=rng_seed, cutoff=cutoff, differing=differing
    )
    if export is not None:
        w = string_hyperspace_vector(report.string, seed, samples)
        write_signal_csv(w.to_signal(normalize=True), export)
        logger.info("Wrote the hyperspace vector to {path}", path=export)
    echo_report(report, config.format)
    return 0 if report.passed else 1
