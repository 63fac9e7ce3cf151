# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

"""
NBLV wire format.

Every frame is big-endian::

    magic[4B] "NBLV" | version[1B] 0x01 | kind[1B] | length[4B] | payload[length]

Payloads:

* HELLO (0x01): epsilon as binary64, seed_id[16B]
* FINGERPRINT (0x02): k as u32, ``ceil(k / 8)`` bytes packed MSB-first
  (``+1`` as bit 1), pad bits zero
* VERDICT (0x03): one byte, 0x01 equal_presumed, 0x00 different
* ERROR (0x7F): code[1B], UTF-8 text
"""

from dataclasses import dataclass
from enum import Enum, IntEnum
from struct import Struct
from typing import ClassVar, Union

import numpy as np

from ..errors import (
    BadMagicError,
    ErrorCode,
    LengthOverflowError,
    MalformedPayloadError,
    TruncatedFrameError,
    UnknownKindError,
    UnknownVersionError,
)
from ..rtw_logic import RtwFingerprint
from ..sequences import unpack_signs

MAGIC = b"NBLV"
VERSION = 0x01
MAX_PAYLOAD = 1 << 20
SEED_ID_SIZE = 16

# magic[4B] | version[1B] | kind[1B] | length[4B]
header_fmt = Struct(">4sBBI")
HEADER_SIZE = header_fmt.size
_hello_fmt = Struct(">d16s")
_k_fmt = Struct(">I")


class MessageKind(IntEnum):
    HELLO = 0x01
    FINGERPRINT = 0x02
    VERDICT = 0x03
    ERROR = 0x7F


class Decision(str, Enum):
    EQUAL_PRESUMED = "equal_presumed"
    DIFFERENT = "different"


@dataclass(frozen=True)
class HelloMessage:
    kind: ClassVar[MessageKind] = MessageKind.HELLO

    epsilon: float
    seed_id: bytes

    def __post_init__(self):
        if len(self.seed_id) != SEED_ID_SIZE:
            raise MalformedPayloadError(f"seed_id must be {SEED_ID_SIZE} bytes long.")


@dataclass(frozen=True)
class FingerprintMessage:
    kind: ClassVar[MessageKind] = MessageKind.FINGERPRINT

    k: int
    packed: bytes

    def __post_init__(self):
        _check_packed(self.k, self.packed)

    @classmethod
    def from_fingerprint(cls, fp: RtwFingerprint) -> "FingerprintMessage":
        return cls(fp.k, fp.pack())

    def signs(self) -> np.ndarray:
        return unpack_signs(self.packed, self.k)


@dataclass(frozen=True)
class VerdictMessage:
    kind: ClassVar[MessageKind] = MessageKind.VERDICT

    decision: Decision


@dataclass(frozen=True)
class ErrorMessage:
    kind: ClassVar[MessageKind] = MessageKind.ERROR

    code: ErrorCode
    text: str


ProtocolMessage = Union[HelloMessage, FingerprintMessage, VerdictMessage, ErrorMessage]


def _check_packed(k: int, packed: bytes) -> None:
    if k < 1:
        raise MalformedPayloadError(f"Fingerprint k must be at least 1, got {k}.")
    if len(packed) != (k + 7) // 8:
        raise MalformedPayloadError(
            f"Fingerprint with k={k} needs {(k + 7) // 8} bytes, got {len(packed)}."
        )
    pad = 8 * len(packed) - k
    if pad and packed[-1] & ((1 << pad) - 1):
        raise MalformedPayloadError("Fingerprint pad bits must be zero.")


def encode_payload(message: ProtocolMessage) -> bytes:
    if isinstance(message, HelloMessage):
        return _hello_fmt.pack(message.epsilon, message.seed_id)
    if isinstance(message, FingerprintMessage):
        return _k_fmt.pack(message.k) + message.packed
    if isinstance(message, VerdictMessage):
        return b"\x01" if message.decision is Decision.EQUAL_PRESUMED else b"\x00"
    if isinstance(message, ErrorMessage):
        return bytes([message.code]) + message.text.encode("utf-8")
    raise TypeError(f"Not a protocol message: {message!r}")


def encode(message: ProtocolMessage) -> bytes:
    payload = encode_payload(message)
    if len(payload) > MAX_PAYLOAD:
        raise LengthOverflowError(f"Payload of {len(payload)} bytes exceeds {MAX_PAYLOAD}.")
    return header_fmt.pack(MAGIC, VERSION, message.kind, len(payload)) + payload


def parse_header(header: bytes) -> tuple[MessageKind, int]:
    """Validate a frame header and return its kind and payload length."""
    if len(header) < HEADER_SIZE:
        raise TruncatedFrameError(
            f"Frame header needs {HEADER_SIZE} bytes, got {len(header)}."
        )
    magic, version, kind, length = header_fmt.unpack(header[:HEADER_SIZE])
    if magic != MAGIC:
        raise BadMagicError(f"Bad frame magic {magic.hex()}.")
    if version != VERSION:
        raise UnknownVersionError(f"Unknown protocol version {version}.")
    try:
        message_kind = MessageKind(kind)
    except ValueError:
        raise UnknownKindError(f"Unknown message kind 0x{kind:02x}.") from None
    if length > MAX_PAYLOAD:
        raise LengthOverflowError(f"Payload length {length} exceeds {MAX_PAYLOAD}.")
    return message_kind, length


def decode_payload(kind: MessageKind, payload: bytes) -> ProtocolMessage:
    if kind is MessageKind.HELLO:
        if len(payload) != _hello_fmt.size:
            raise MalformedPayloadError(
                f"HELLO payload must be {_hello_fmt.size} bytes, got {len(payload)}."
            )
        epsilon, seed_id = _hello_fmt.unpack(payload)
        return HelloMessage(epsilon, seed_id)
    if kind is MessageKind.FINGERPRINT:
        if len(payload) < _k_fmt.size:
            raise MalformedPayloadError("FINGERPRINT payload is too short.")
        (k,) = _k_fmt.unpack(payload[: _k_fmt.size])
        return FingerprintMessage(k, payload[_k_fmt.size :])
    if kind is MessageKind.VERDICT:
        if payload == b"\x01":
            return VerdictMessage(Decision.EQUAL_PRESUMED)
        if payload == b"\x00":
            return VerdictMessage(Decision.DIFFERENT)
        raise MalformedPayloadError(f"Invalid VERDICT payload {payload.hex()}.")
    if not payload:
        raise MalformedPayloadError("ERROR payload must contain a code.")
    try:
        code = ErrorCode(payload[0])
        text = payload[1:].decode("utf-8")
    except (ValueError, UnicodeDecodeError) as e:
        raise MalformedPayloadError(f"Invalid ERROR payload: {e}") from None
    return ErrorMessage(code, text)


def decode(frame: bytes) -> ProtocolMessage:
    """Decode exactly one complete frame."""
    kind, length = parse_header(frame)
    payload = frame[HEADER_SIZE:]
    if len(payload) < length:
        raise TruncatedFrameError(
            f"Frame declares {length} payload bytes but only {len(payload)} follow."
        )
    if len(payload) > length:
        raise MalformedPayloadError(f"{len(payload) - length} trailing bytes after frame.")
    return decode_payload(kind, bytes(payload))
