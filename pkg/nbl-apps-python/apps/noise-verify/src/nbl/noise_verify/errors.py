# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

"""
Errors raised by the noise-verify library code.

The classes extend the hierarchy from :py:mod:`nbl.cli_utils.errors`, so the
command line wrapper maps them onto the documented exit codes:

* :py:exc:`DomainError` and subclasses: exit code 2 (invalid parameters)
* :py:exc:`TransportError`: exit code 3 (connection failures)
* :py:exc:`ProtocolError` and subclasses: exit code 4 (protocol ERROR codes)
"""

from enum import IntEnum

from nbl.cli_utils.errors import AppConfigurationError, AppFailure

EXIT_TRANSPORT = 3
EXIT_PROTOCOL = 4


class ErrorCode(IntEnum):
    """Codes carried in ERROR frames."""

    SEED_MISMATCH = 0x01
    PARAM_MISMATCH = 0x02
    FRAMING = 0x03
    UNEXPECTED_MESSAGE = 0x04


class DomainError(AppConfigurationError, ValueError):
    """A parameter is outside the domain of an operation."""


class ShapeMismatchError(DomainError):
    """Two operands do not have the same length, k or sample rate."""


class OracleSizeError(DomainError):
    """An exhaustive enumeration would exceed the supported size bound."""


class TransportError(AppFailure):
    """The byte channel failed: connection refused, reset or closed early."""

    exit_code = EXIT_TRANSPORT


class ProtocolError(AppFailure):
    """The session was aborted with a protocol error code."""

    exit_code = EXIT_PROTOCOL
    code: ErrorCode = ErrorCode.UNEXPECTED_MESSAGE

    def __init__(self, reason: str, code: ErrorCode | None = None):
        super().__init__(reason)
        if code is not None:
            self.code = code

    def __str__(self) -> str:
        return f"{self.code.name}: {self.reason}"


class FramingError(ProtocolError):
    """Base class for all frame decoding errors."""

    code = ErrorCode.FRAMING


class BadMagicError(FramingError):
    """Frame does not start with the NBLV magic."""


class UnknownVersionError(FramingError):
    """Frame carries an unsupported protocol version."""


class UnknownKindError(FramingError):
    """Frame carries an unknown message kind."""


class TruncatedFrameError(FramingError):
    """Frame is shorter than its header or declared payload length."""


class LengthOverflowError(FramingError):
    """Declared payload length exceeds the supported maximum."""


class MalformedPayloadError(FramingError):
    """Payload does not match the layout of its message kind."""
