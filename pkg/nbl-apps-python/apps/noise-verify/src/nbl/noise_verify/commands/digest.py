# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

from pathlib import Path
from typing import Optional

import click
from loguru import logger

from ..config import CliConfig
from ..rtw_logic import hash_digest
from .options import input_option, open_input, seed_file_option

click_name = "digest"
click_help_text = "Print the keyed k-bit digest of a file."
click_setup = [
    input_option,
    seed_file_option,
    click.option("--k", "k", required=True, type=click.IntRange(min=1), help="Digest size."),
]


def click_command(input_file: Path, seed_file: Optional[Path], k: int) -> None:
    config = CliConfig.from_options(seed_file=seed_file, k=k)
    seed = config.load_seed()
    logger.debug("Hashing `{file}` with k={k}", file=input_file, k=k)
    with open_input(input_file) as f:
        digest = hash_digest(f, seed, k)
    click.echo(f"digest: {digest.hex()}")
    click.echo(f"k: {k}")
    click.echo(f"seed_id: {seed.seed_id_hex}")
