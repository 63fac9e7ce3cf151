# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

from typing import Callable, Optional, Protocol


class ClickSubCommandProvider(Protocol):
    click_name: str
    click_setup: Optional[list[Callable]]
    click_command: Callable[..., Optional[int]]


class ClickCommandProvider(Protocol):
    click_name: str
    click_help_text: str = ""
