# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

from pathlib import Path
from typing import Optional

import click

from ..config import CliConfig
from ..protocol.server import serve_tcp
from .options import (
    echo_verdict,
    epsilon_option,
    input_option,
    k_option,
    open_input,
    seed_file_option,
)

click_name = "serve"
click_help_text = (
    "Answer verification sessions for a file. Without --epsilon/--k the error "
    "bound announced by each peer is used."
)
click_setup = [
    click.option(
        "--listen",
        default="0.0.0.0:7411",
        show_default=True,
        help="Address to listen on, [HOST]:PORT.",
    ),
    input_option,
    seed_file_option,
    epsilon_option,
    k_option,
    click.option(
        "--once",
        is_flag=True,
        default=False,
        help="Serve a single session and exit with its verdict code.",
    ),
]


def click_command(
    listen: str,
    input_file: Path,
    seed_file: Optional[Path],
    epsilon: Optional[float],
    k: Optional[int],
    once: bool,
) -> int:
    config = CliConfig.from_options(seed_file=seed_file, epsilon=epsilon, k=k)
    seed = config.load_seed()
    # fail before listening
    open_input(input_file).close()
    verdict = serve_tcp(
        listen,
        lambda: open_input(input_file),
        seed,
        epsilon=config.optional_epsilon(),
        once=once,
    )
    if verdict is None:
        return 0
    echo_verdict(verdict)
    return verdict.exit_code
