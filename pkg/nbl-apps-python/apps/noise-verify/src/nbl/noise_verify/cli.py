# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

"""
Command line interface of noise-verify.

Exit codes: 0 equal (or report passed), 1 different (or report failed),
2 usage or configuration error, 3 transport error, 4 protocol error,
5 internal error.
"""

from nbl.cli_utils.cli_base import make_app, read_version_from_package

from .commands import (
    collisions,
    connect,
    continuum,
    digest,
    mc_error,
    oracle,
    orthogonality,
    scenario,
    seed,
    serve,
)


class CLI:
    click_name = "noise-verify"
    click_command = None
    click_subcommands = [
        digest,
        serve,
        connect,
        mc_error,
        orthogonality,
        oracle,
        scenario,
        continuum,
        collisions,
        seed,
    ]
    click_help_text = "Verify that two remote strings are equal by exchanging fingerprints."


main = make_app(
    provider=CLI,
    version_callback=read_version_from_package(__package__),
)


if __name__ == "__main__":
    main()
