# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

from importlib.resources import files


def _get_version() -> str:
    return files(__package__).joinpath("_version.txt").read_text().strip()


__version__ = _get_version()
