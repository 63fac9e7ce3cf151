# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

from typing import Callable

import click
import mock
import pytest
from click.testing import CliRunner
from loguru import logger
from nbl.cli_utils.cli_base import make_app, read_version_from_package
from nbl.cli_utils.errors import AppConfigurationError, AppFailure
from pydantic import BaseModel


def _command_app(command: Callable, version: str = "1", setup=None):
    provider = type(
        "Provider",
        (),
        {
            "click_name": "single",
            "click_help_text": "help",
            "click_setup": setup or [],
            "click_command": staticmethod(command),
        },
    )
    return make_app(provider, version_callback=lambda: version)


def _group_app(**commands: Callable):
    subcommands = [
        type(name, (), {"click_name": name, "click_command": staticmethod(command)})
        for name, command in commands.items()
    ]
    provider = type(
        "Provider",
        (),
        {"click_name": "group", "click_help_text": "help", "click_subcommands": subcommands},
    )
    return make_app(provider, version_callback=lambda: "1")


def _chatty():
    logger.debug("debug detail")
    logger.info("info message")


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner(mix_stderr=False)


def test_provider_needs_command_or_subcommands():
    class EmptyProvider:
        click_name = "empty"

    with pytest.raises(TypeError, match=".*EmptyProvider.* must provide either.*"):
        make_app(EmptyProvider, version_callback=lambda: "1")


def test_subcommand_provider_needs_command():
    class Sub:
        click_name = "sub"

    class Main:
        click_name = "main"
        click_subcommands = [Sub]

    with pytest.raises(TypeError, match="subcommand provider must have"):
        make_app(Main, version_callback=lambda: "1")


def test_read_version_from_package(mocker):
    files = mocker.patch("importlib.resources.files")
    files.return_value.joinpath.return_value.read_text.return_value = "1.0"
    assert read_version_from_package("some.package")() == "1.0"
    files.assert_called_once_with("some.package")
    files.return_value.joinpath.assert_called_once_with("_version.txt")


def test_version_is_printed_stripped(runner: CliRunner):
    get_version = mock.Mock(return_value="  1.0.2\n")
    provider = type(
        "Provider", (), {"click_name": "v", "click_command": staticmethod(lambda: 0)}
    )
    result = runner.invoke(make_app(provider, version_callback=get_version), ["--version"])
    assert result.exit_code == 0
    assert result.stdout == "1.0.2\n"
    get_version.assert_called_once()


@pytest.mark.parametrize(
    "args, env, shows_debug",
    [
        ([], {}, False),
        (["--debug"], {}, True),
        ([], {"LOG_LEVEL": "deBUG"}, True),
        ([], {"LOG_LEVEL": "WARNING"}, False),
    ],
)
def test_log_level(runner: CliRunner, args, env, shows_debug):
    result = runner.invoke(_command_app(_chatty), args, env=env)
    assert result.exit_code == 0
    assert "info message" in result.stderr
    assert ("debug detail" in result.stderr) is shows_debug


def test_logs_go_to_stderr_and_output_to_stdout(runner: CliRunner):
    def command():
        logger.info("log message")
        click.echo("command output")

    result = runner.invoke(_command_app(command))
    assert result.stdout == "command output\n"
    assert "log message" in result.stderr


def test_options_from_setup_are_passed(runner: CliRunner):
    def command(name: str):
        click.echo(f"hello {name}")

    app = _command_app(command, setup=[click.option("--name", required=True)])
    assert runner.invoke(app, ["--name", "peer"]).stdout == "hello peer\n"
    assert runner.invoke(app, []).exit_code == 2


def test_group_without_arguments_shows_usage(runner: CliRunner):
    result = runner.invoke(_group_app(sub1=lambda: 0))
    assert result.stdout.startswith("Usage:")


def test_group_ignores_own_command(runner: CliRunner):
    class Main:
        click_name = "main"
        click_help_text = "help"
        click_subcommands = [type("Sub", (), {"click_name": "sub", "click_command": _chatty})]

        @staticmethod
        def click_command():
            click.echo("main command")

    result = runner.invoke(make_app(Main, version_callback=lambda: "1"))
    assert "main command" not in result.stdout
    assert result.stdout.startswith("Usage:")


def test_group_dispatches_to_subcommands(runner: CliRunner):
    app = _group_app(sub1=lambda: click.echo("one"), sub2=lambda: click.echo("two"))
    assert runner.invoke(app, ["sub1"]).stdout == "one\n"
    assert runner.invoke(app, ["sub2"]).stdout == "two\n"


@pytest.mark.parametrize("code", [0, 1, 4])
def test_returned_integer_becomes_exit_code(runner: CliRunner, code: int):
    assert runner.invoke(_command_app(lambda: code)).exit_code == code
    assert runner.invoke(_group_app(sub=lambda: code), ["sub"]).exit_code == code


def _boom():
    raise RuntimeError("Boom!")


def _failure():
    raise AppFailure("Peer went away", exit_code=3)


def _configuration_error():
    raise AppConfigurationError("Wrong setting!")


def _validation_error():
    class Settings(BaseModel):
        x: int

    Settings(x="abc")


@pytest.mark.parametrize(
    "command, exit_code, message, traceback",
    [
        (_boom, 5, "An unexpected error has occurred.", True),
        (_failure, 3, "Peer went away", False),
        (_configuration_error, 2, "Wrong setting!", False),
        (_validation_error, 2, "Input validation failed for ('x',)", False),
    ],
)
def test_errors_are_mapped_to_exit_codes(
    runner: CliRunner, command, exit_code, message, traceback
):
    for result in [
        runner.invoke(_command_app(command)),
        runner.invoke(_group_app(sub=command), ["sub"]),
    ]:
        assert result.exit_code == exit_code
        assert message in result.stderr
        assert ("Traceback" in result.stderr) is traceback
        assert result.stdout == ""
