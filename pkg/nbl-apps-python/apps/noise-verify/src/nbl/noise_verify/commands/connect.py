# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

from pathlib import Path
from typing import Optional

import click

from ..config import CliConfig
from ..protocol.session import run_initiator
from ..protocol.transport import connect_tcp
from .options import (
    echo_verdict,
    epsilon_option,
    input_option,
    k_option,
    open_input,
    seed_file_option,
    timeout_option,
)

click_name = "connect"
click_help_text = (
    "Verify a file against a peer running `serve`. "
    "Exits with 0 if the files are presumed equal and 1 if they differ."
)
click_setup = [
    click.option("--peer", required=True, help="Address of the peer, HOST:PORT."),
    input_option,
    seed_file_option,
    epsilon_option,
    k_option,
    timeout_option,
]


def click_command(
    peer: str,
    input_file: Path,
    seed_file: Optional[Path],
    epsilon: Optional[float],
    k: Optional[int],
    timeout: float,
) -> int:
    config = CliConfig.from_options(seed_file=seed_file, epsilon=epsilon, k=k)
    seed = config.load_seed()
    error_bound = config.required_epsilon()
    with open_input(input_file) as source, connect_tcp(peer, timeout) as channel:
        verdict = run_initiator(source, seed, error_bound, channel)
    echo_verdict(verdict)
    return verdict.exit_code
