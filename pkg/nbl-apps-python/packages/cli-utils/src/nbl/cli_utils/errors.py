# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

"""
Exception classes shared by the command line apps.

* :py:exc:`AppFailure`: a failure the user can resolve, logged without stack
  trace. It carries the process exit code.

  * :py:exc:`AppConfigurationError` (exit code 2)
  * :py:exc:`AppFileNotFoundError`

* :py:exc:`AppException`: unexpected errors, logged with stack trace and
  mapped to exit code 5.

  * :py:exc:`AppError`
"""

__all__ = [
    "EXIT_INTERNAL_ERROR",
    "EXIT_USAGE",
    "AppConfigurationError",
    "AppError",
    "AppException",
    "AppFailure",
    "AppFileNotFoundError",
]

EXIT_USAGE = 2
EXIT_INTERNAL_ERROR = 5


class AppFailure(Exception):
    """
    Base class for failures the user can resolve.

    The command line wrapper logs `reason` and exits with `exit_code`.
    """

    exit_code: int = 1

    def __init__(self, reason: str, exit_code: int | None = None):
        super().__init__(reason)
        self.reason = reason
        if exit_code is not None:
            self.exit_code = exit_code


class AppConfigurationError(AppFailure):
    """Errors related to app configuration or invalid input parameters."""

    exit_code = EXIT_USAGE


class AppFileNotFoundError(AppConfigurationError):
    """A required file is not found."""


class AppException(Exception):
    """
    Base class for unexpected app errors.

    Use it to wrap built-in exceptions with a more helpful message.
    """


class AppError(AppException):
    """
    Unexpected error with context, e.g.::

        try:
            ...
        except Exception as e:
            raise AppError("During ..., an error occurred!") from e
    """
