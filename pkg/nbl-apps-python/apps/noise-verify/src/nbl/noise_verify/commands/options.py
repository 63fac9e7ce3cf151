# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

"""Click options used by several subcommands."""

from pathlib import Path
from typing import BinaryIO

import click
from nbl.cli_utils.errors import AppFileNotFoundError

from ..analysis.reports import FORMATS, Format, render
from ..protocol.session import VerificationVerdict
from ..rtw_logic import headline_k

seed_file_option = click.option(
    "--seed-file",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Shared 32-byte seed file (default: $NOISE_VERIFY_SEED_FILE).",
)
epsilon_option = click.option(
    "--epsilon",
    type=float,
    default=None,
    help="Error bound in (0, 1); k is the smallest integer with 2^-k < epsilon.",
)
k_option = click.option(
    "--k",
    "k",
    type=int,
    default=None,
    help="Number of fingerprint components, instead of --epsilon.",
)
format_option = click.option(
    "--format",
    "fmt",
    type=click.Choice(FORMATS),
    default=None,
    help="Output format of the report (default: $NOISE_VERIFY_FORMAT or text).",
)
rng_seed_option = click.option(
    "--seed",
    "rng_seed",
    type=int,
    default=None,
    help="Seed of the random number generator, for reproducible runs.",
)
input_option = click.option(
    "--input",
    "input_file",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="File to verify.",
)
timeout_option = click.option(
    "--timeout",
    type=click.FloatRange(min=0, min_open=True),
    default=30.0,
    show_default=True,
    help="Socket timeout in seconds.",
)


def open_input(path: Path) -> BinaryIO:
    if not path.is_file():
        raise AppFileNotFoundError(f"Input file `{path}` doesn't exist!")
    return open(path, "rb")


def echo_report(report: object, fmt: Format) -> None:
    click.echo(render(report, fmt), nl=False)


def echo_verdict(verdict: VerificationVerdict) -> None:
    click.echo(f"decision: {verdict.decision.value}")
    click.echo(f"epsilon: {verdict.epsilon:g}")
    click.echo(f"k: {verdict.k}")
    click.echo(f"headline_k: {headline_k(verdict.epsilon)}")
    click.echo(f"bits_communicated: {verdict.bits_communicated}")
    click.echo(f"transport_bytes: {verdict.transport_bytes}")
