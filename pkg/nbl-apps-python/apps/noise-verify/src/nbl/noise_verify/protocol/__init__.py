# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

from .messages import (
    Decision,
    ErrorMessage,
    FingerprintMessage,
    HelloMessage,
    MessageKind,
    ProtocolMessage,
    VerdictMessage,
    decode,
    encode,
)
from .server import VerificationServer, serve_tcp
from .session import (
    InitiatorSession,
    PeerAbortedError,
    Phase,
    ResponderSession,
    Role,
    SessionState,
    VerificationVerdict,
    exchange_in_memory,
    run_initiator,
    run_responder,
    verify_local,
)
from .transport import Channel, LoopbackChannel, TcpChannel, connect_tcp

__all__ = [
    "Channel",
    "Decision",
    "ErrorMessage",
    "FingerprintMessage",
    "HelloMessage",
    "InitiatorSession",
    "LoopbackChannel",
    "MessageKind",
    "PeerAbortedError",
    "Phase",
    "ProtocolMessage",
    "ResponderSession",
    "Role",
    "SessionState",
    "TcpChannel",
    "VerificationServer",
    "VerificationVerdict",
    "VerdictMessage",
    "connect_tcp",
    "decode",
    "encode",
    "exchange_in_memory",
    "run_initiator",
    "run_responder",
    "serve_tcp",
    "verify_local",
]
