# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

from pathlib import Path
from typing import Optional

import click
from loguru import logger

from ..common_coin import CoinSeed, write_seed_file

click_name = "seed"
click_help_text = "Write a new shared seed file. Distribute it to both parties out-of-band."
click_setup = [
    click.option(
        "--output",
        required=True,
        type=click.Path(dir_okay=False, path_type=Path),
        help="Where to write the 32-byte seed.",
    ),
    click.option(
        "--from-int",
        "from_int",
        type=click.IntRange(min=0),
        default=None,
        help="Derive the seed from an integer instead of the OS random source (testing only).",
    ),
    click.option("--force", is_flag=True, default=False, help="Overwrite an existing file."),
]


def click_command(output: Path, from_int: Optional[int], force: bool) -> None:
    if from_int is not None:
        logger.warning("A seed derived from an integer is predictable, use it for tests only")
        seed = CoinSeed.from_int(from_int)
    else:
        seed = CoinSeed.generate()
    write_seed_file(output, seed, force=force)
    click.echo(f"seed_id: {seed.seed_id_hex}")
