# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

"""
Build click applications from plain provider classes or modules.

A provider describes one command::

    class CLI:
        click_name = "noise-verify"
        click_help_text = "Verify remote strings."
        click_subcommands = [digest, connect]

    main = make_app(provider=CLI, version_callback=read_version_from_package(__package__))

Provider attributes:

* ``click_name``: name of the command.
* ``click_help_text``: help text, optional.
* ``click_setup``: list of ``click.option``/``click.argument`` decorators
  (without the ``@``), optional.
* ``click_command``: the function doing the work. Its integer return value is
  the exit code. Not needed when ``click_subcommands`` is given.
* ``click_subcommands``: providers of subcommands. A provider with
  subcommands becomes a ``click.Group`` and its own ``click_command`` is
  ignored.

Every app gets ``--version``, ``--debug`` and ``--colors/--no-colors``.
Command output goes to stdout, log messages to stderr.

Exit codes: the value returned by ``click_command`` (0 for ``None``); 2 for
click usage errors, :py:exc:`pydantic.ValidationError` and
:py:exc:`~nbl.cli_utils.errors.AppConfigurationError`; the ``exit_code`` of
any other :py:exc:`~nbl.cli_utils.errors.AppFailure`; 5 for anything else.
"""

import functools
import importlib.resources
import os
import sys
from typing import Any, Callable, Iterable, Optional

import click
import pydantic
from loguru import logger

from .errors import EXIT_INTERNAL_ERROR, EXIT_USAGE, AppFailure
from .types import ClickCommandProvider, ClickSubCommandProvider

_LOG_FORMATS = {
    "DEBUG": "<lvl>{time:HH:mm:ss} | {level:5} | {message}</lvl>",
    "INFO": "<lvl>{level:5} | {message}</lvl>",
}


def read_version_from_package(
    package: str, version_file: str = "_version.txt"
) -> Callable[[], str]:
    """Return a callback reading ``version_file`` from inside ``package``."""

    def read_version() -> str:
        logger.debug(
            "Reading version from {file} in {package}", file=version_file, package=package
        )
        return importlib.resources.files(package).joinpath(version_file).read_text()

    return read_version


def set_up_logging(debug: bool, colors: bool = False) -> None:
    """Replace all loguru sinks by one stderr sink, DEBUG or INFO."""
    requested = os.getenv("LOG_LEVEL", "INFO").upper()
    level = "DEBUG" if debug or requested == "DEBUG" else "INFO"
    logger.remove()
    logger.add(
        sys.stderr,
        format=_LOG_FORMATS[level],
        level=level,
        colorize=colors,
        backtrace=False,
        diagnose=level == "DEBUG",
    )


class _DebugAwareOption(click.Option):
    # --version is eager; remember --debug before its callback runs.
    def handle_parse_result(self, ctx, opts, args):
        ctx.meta["debug"] = opts.get("debug", False)
        return super().handle_parse_result(ctx, opts, args)


def handle_app_errors(f: Callable[..., Optional[int]]) -> Callable[..., None]:
    """Exit the current click context with the exit code of ``f``'s outcome."""

    @functools.wraps(f)
    def run(*args, **kwargs):
        try:
            exit_code = f(*args, **kwargs)
        except click.ClickException:
            raise
        except pydantic.ValidationError as e:
            for error in e.errors():
                logger.error(
                    "Input validation failed for {loc}: {msg}.",
                    loc=error["loc"],
                    msg=error["msg"],
                )
            exit_code = EXIT_USAGE
        except AppFailure as e:
            logger.error("{reason}", reason=str(e))
            exit_code = e.exit_code
        except Exception:
            logger.opt(depth=1, exception=True).error("An unexpected error has occurred.")
            exit_code = EXIT_INTERNAL_ERROR
        click.get_current_context().exit(exit_code or 0)

    return run


def _apply(decorators: Iterable[Callable], f: Callable) -> Any:
    for decorator in reversed(list(decorators)):
        f = decorator(f)
    return f


def _global_options(version_callback: Callable[[], str]) -> list[Callable]:
    def print_version(ctx: click.Context, param: click.Parameter, value: Any):
        if not value or ctx.resilient_parsing:
            return
        set_up_logging(ctx.meta.get("debug", False))
        click.echo(version_callback().strip())
        ctx.exit()

    return [
        click.option(
            "--version",
            is_flag=True,
            callback=print_version,
            cls=_DebugAwareOption,
            expose_value=False,
            is_eager=True,
            help="Output version information and exit.",
        ),
        click.option(
            "--colors/--no-colors",
            default=True,
            help="Enable or disable colors in log output.",
        ),
        click.option("--debug", is_flag=True, default=False, help="Show debug log messages."),
    ]


def make_app(provider: ClickCommandProvider, *, version_callback: Callable[[], str]):
    """
    Create a click command (or group) from ``provider``.

    ``version_callback`` returns the version printed by ``--version``,
    see :py:func:`read_version_from_package`.
    """
    subcommands = getattr(provider, "click_subcommands", None) or []
    command = getattr(provider, "click_command", None)
    help_text = getattr(provider, "click_help_text", "")
    if not subcommands and not command:
        raise TypeError(
            f"CLI provider '{provider}' must provide either "
            "'click_command' or 'click_subcommands'"
        )

    def entrypoint(ctx: click.Context, colors: bool, debug: bool, *args, **kwargs):
        ctx.color = colors
        set_up_logging(debug, colors)
        if not subcommands:
            return command(*args, **kwargs)

    if subcommands:
        decorators = [
            click.group(name=provider.click_name, help=help_text, no_args_is_help=True),
            *_global_options(version_callback),
            click.pass_context,
        ]
    else:
        decorators = [
            click.command(name=provider.click_name, help=help_text),
            *_global_options(version_callback),
            *(getattr(provider, "click_setup", None) or []),
            click.pass_context,
            handle_app_errors,
        ]
    app = _apply(decorators, entrypoint)
    for subcommand in subcommands:
        _add_subcommand(subcommand, app)
    return app


def _add_subcommand(provider: ClickSubCommandProvider, group: click.Group) -> click.Command:
    command = getattr(provider, "click_command", None)
    if not command:
        raise TypeError("Click subcommand provider must have a 'click_command' function!")
    decorators = [
        click.command(provider.click_name, help=getattr(provider, "click_help_text", None)),
        *(getattr(provider, "click_setup", None) or []),
        handle_app_errors,
    ]
    subcommand = _apply(decorators, command)
    group.add_command(subcommand)
    return subcommand
