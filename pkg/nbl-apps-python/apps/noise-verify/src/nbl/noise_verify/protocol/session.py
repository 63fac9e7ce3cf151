# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

"""
The verification session state machine.

Both roles run through the same phases::

    Init --HELLO--> HelloExchanged --FINGERPRINT--> FingerprintSent --VERDICT--> Done

The initiator sends HELLO, answers the responder's HELLO with its
fingerprint and waits for the VERDICT. The responder checks the HELLO,
replies with its own, compares the received fingerprint with its own and
sends the VERDICT. Any unexpected, malformed or mismatching message moves a
session to ``Failed``; a failure detected locally is reported to the peer
with an ERROR frame.

Sessions do no I/O themselves. :py:func:`run_initiator` and
:py:func:`run_responder` drive them over a
:py:class:`~nbl.noise_verify.protocol.transport.Channel`,
:py:func:`exchange_in_memory` pumps encoded frames between two sessions
directly.
"""

import math
from collections import deque
from dataclasses import dataclass, replace
from enum import Enum
from typing import ClassVar, Optional

from loguru import logger

from ..common_coin import CoinSource
from ..errors import ErrorCode, ProtocolError, TransportError
from ..rtw_logic import (
    BitSource,
    Relation,
    RtwFingerprint,
    check_equal_relations,
    compute_k,
    fingerprint,
)
from .messages import (
    Decision,
    ErrorMessage,
    FingerprintMessage,
    HelloMessage,
    ProtocolMessage,
    VerdictMessage,
    decode,
    encode,
)
from .transport import Channel, read_message, write_message


class Phase(str, Enum):
    INIT = "Init"
    HELLO_EXCHANGED = "HelloExchanged"
    FINGERPRINT_SENT = "FingerprintSent"
    DONE = "Done"
    FAILED = "Failed"


class Role(str, Enum):
    INITIATOR = "initiator"
    RESPONDER = "responder"


class PeerAbortedError(ProtocolError):
    """The peer sent an ERROR frame."""


@dataclass
class SessionState:
    role: Role
    seed_id: bytes
    phase: Phase = Phase.INIT
    bits_charged: int = 0
    epsilon: Optional[float] = None
    k: Optional[int] = None


@dataclass(frozen=True)
class VerificationVerdict:
    decision: Decision
    epsilon: float
    k: int
    bits_communicated: int
    lengths_known: Optional[tuple[int, int]] = None
    transport_bytes: int = 0

    @property
    def equal_presumed(self) -> bool:
        return self.decision is Decision.EQUAL_PRESUMED

    @property
    def exit_code(self) -> int:
        return 0 if self.equal_presumed else 1


def _decide(own: RtwFingerprint, other: RtwFingerprint) -> Decision:
    if check_equal_relations(own, other) is Relation.HOLDS:
        return Decision.EQUAL_PRESUMED
    return Decision.DIFFERENT


class Session:
    role: ClassVar[Role]

    def __init__(self, source: BitSource, coin: CoinSource, epsilon: Optional[float]):
        self._source = source
        self._coin = coin
        self.state = SessionState(self.role, coin.seed_id)
        if epsilon is not None:
            self.state.k = compute_k(epsilon)
            self.state.epsilon = float(epsilon)
        self.verdict: Optional[VerificationVerdict] = None

    @property
    def phase(self) -> Phase:
        return self.state.phase

    @property
    def done(self) -> bool:
        return self.state.phase is Phase.DONE

    def start(self) -> list[ProtocolMessage]:
        return []

    def receive(self, message: ProtocolMessage) -> list[ProtocolMessage]:
        """Process one message from the peer and return the replies to send."""
        if isinstance(message, ErrorMessage):
            self._transition(Phase.FAILED)
            raise PeerAbortedError(f"Peer aborted the session: {message.text}", message.code)
        try:
            return self._handle(message)
        except ProtocolError:
            self._transition(Phase.FAILED)
            raise

    def abort(self, error: ProtocolError) -> list[ProtocolMessage]:
        """Move to Failed and return the ERROR frame to report `error` to the peer."""
        self._transition(Phase.FAILED)
        if isinstance(error, PeerAbortedError):
            return []
        return [ErrorMessage(error.code, error.reason)]

    def _handle(self, message: ProtocolMessage) -> list[ProtocolMessage]:
        raise NotImplementedError

    def _transition(self, phase: Phase) -> None:
        if self.state.phase is not phase:
            logger.debug(
                "{role} session: {old} -> {new}",
                role=self.role.value,
                old=self.state.phase.value,
                new=phase.value,
            )
        self.state.phase = phase

    def _unexpected(self, message: ProtocolMessage) -> ProtocolError:
        return ProtocolError(
            f"Unexpected {message.kind.name} message in phase {self.state.phase.value}.",
            ErrorCode.UNEXPECTED_MESSAGE,
        )

    def _check_seed(self, hello: HelloMessage) -> None:
        if hello.seed_id != self.state.seed_id:
            raise ProtocolError(
                f"seed mismatch: local {self.state.seed_id.hex()}, "
                f"peer {hello.seed_id.hex()}",
                ErrorCode.SEED_MISMATCH,
            )

    def _own_fingerprint(self) -> RtwFingerprint:
        assert self.state.epsilon is not None
        return fingerprint(self._source, self._coin, self.state.epsilon)

    def _finish(self, decision: Decision) -> None:
        assert self.state.epsilon is not None and self.state.k is not None
        self.verdict = VerificationVerdict(
            decision=decision,
            epsilon=self.state.epsilon,
            k=self.state.k,
            bits_communicated=self.state.bits_charged,
        )
        self._transition(Phase.DONE)


class InitiatorSession(Session):
    role = Role.INITIATOR

    def __init__(self, source: BitSource, coin: CoinSource, epsilon: float):
        super().__init__(source, coin, epsilon)

    def start(self) -> list[ProtocolMessage]:
        assert self.state.epsilon is not None
        return [HelloMessage(self.state.epsilon, self.state.seed_id)]

    def _handle(self, message: ProtocolMessage) -> list[ProtocolMessage]:
        phase = self.state.phase
        if phase is Phase.INIT and isinstance(message, HelloMessage):
            self._check_seed(message)
            if message.epsilon != self.state.epsilon:
                raise ProtocolError(
                    f"epsilon mismatch: local {self.state.epsilon}, peer {message.epsilon}",
                    ErrorCode.PARAM_MISMATCH,
                )
            self._transition(Phase.HELLO_EXCHANGED)
            own = self._own_fingerprint()
            self.state.bits_charged += own.k
            self._transition(Phase.FINGERPRINT_SENT)
            return [FingerprintMessage.from_fingerprint(own)]
        if phase is Phase.FINGERPRINT_SENT and isinstance(message, VerdictMessage):
            self._finish(message.decision)
            return []
        raise self._unexpected(message)


class ResponderSession(Session):
    """
    Responder side of a session.

    Without an `epsilon` the responder adopts the one announced by the
    initiator, otherwise both must be equal.
    """

    role = Role.RESPONDER

    def __init__(self, source: BitSource, coin: CoinSource, epsilon: Optional[float] = None):
        super().__init__(source, coin, epsilon)

    def _handle(self, message: ProtocolMessage) -> list[ProtocolMessage]:
        phase = self.state.phase
        if phase is Phase.INIT and isinstance(message, HelloMessage):
            self._check_seed(message)
            self._negotiate(message.epsilon)
            self._transition(Phase.HELLO_EXCHANGED)
            assert self.state.epsilon is not None
            return [HelloMessage(self.state.epsilon, self.state.seed_id)]
        if phase is Phase.HELLO_EXCHANGED and isinstance(message, FingerprintMessage):
            if message.k != self.state.k:
                raise ProtocolError(
                    f"fingerprint has k={message.k}, expected k={self.state.k}",
                    ErrorCode.PARAM_MISMATCH,
                )
            self.state.bits_charged += message.k
            self._transition(Phase.FINGERPRINT_SENT)
            own = self._own_fingerprint()
            received = RtwFingerprint(message.signs(), self.state.seed_id, own.epsilon)
            decision = _decide(own, received)
            self._finish(decision)
            return [VerdictMessage(decision)]
        raise self._unexpected(message)

    def _negotiate(self, epsilon: float) -> None:
        if self.state.epsilon is None:
            if not (math.isfinite(epsilon) and 0.0 < epsilon < 1.0):
                raise ProtocolError(
                    f"announced epsilon {epsilon} is outside (0, 1)", ErrorCode.PARAM_MISMATCH
                )
            self.state.epsilon = epsilon
            self.state.k = compute_k(epsilon)
        elif epsilon != self.state.epsilon:
            raise ProtocolError(
                f"epsilon mismatch: local {self.state.epsilon}, peer {epsilon}",
                ErrorCode.PARAM_MISMATCH,
            )


def _drive(session: Session, channel: Channel) -> VerificationVerdict:
    try:
        for message in session.start():
            write_message(channel, message)
        while not session.done:
            for reply in session.receive(read_message(channel)):
                write_message(channel, reply)
    except ProtocolError as e:
        for reply in session.abort(e):
            try:
                write_message(channel, reply)
            except TransportError:
                logger.debug("Could not deliver ERROR frame to peer")
        raise
    assert session.verdict is not None
    verdict = replace(session.verdict, transport_bytes=channel.transport_bytes)
    logger.info(
        "{role} verdict: {decision} (k={k}, {bits} bits charged, {transport} transport bytes)",
        role=session.role.value,
        decision=verdict.decision.value,
        k=verdict.k,
        bits=verdict.bits_communicated,
        transport=verdict.transport_bytes,
    )
    return verdict


def run_initiator(
    s: BitSource, seed: CoinSource, epsilon: float, channel: Channel
) -> VerificationVerdict:
    """Run the initiator side of a session over `channel`."""
    return _drive(InitiatorSession(s, seed, epsilon), channel)


def run_responder(
    s: BitSource, seed: CoinSource, epsilon: Optional[float], channel: Channel
) -> VerificationVerdict:
    """Run the responder side of a session over `channel`."""
    return _drive(ResponderSession(s, seed, epsilon), channel)


def exchange_in_memory(
    initiator: InitiatorSession, responder: ResponderSession
) -> tuple[VerificationVerdict, VerificationVerdict]:
    """
    Run two sessions against each other, passing every message through the codec.

    Both verdicts report the total number of frame bytes exchanged.
    """
    peer_of: dict[int, Session] = {id(initiator): responder, id(responder): initiator}
    pending: deque[tuple[Session, ProtocolMessage]] = deque(
        (responder, message) for message in initiator.start()
    )
    transport_bytes = 0
    while pending:
        target, message = pending.popleft()
        frame = encode(message)
        transport_bytes += len(frame)
        other = peer_of[id(target)]
        try:
            replies = target.receive(decode(frame))
        except ProtocolError as e:
            for reply in target.abort(e):
                try:
                    other.receive(reply)
                except ProtocolError:
                    pass
            raise
        pending.extend((other, reply) for reply in replies)
    if initiator.verdict is None or responder.verdict is None:
        raise ProtocolError("Session ended without a verdict.", ErrorCode.UNEXPECTED_MESSAGE)
    return (
        replace(initiator.verdict, transport_bytes=transport_bytes),
        replace(responder.verdict, transport_bytes=transport_bytes),
    )


def verify_local(
    a: BitSource, b: BitSource, coin: CoinSource, epsilon: float
) -> VerificationVerdict:
    """Fingerprint both inputs in-process; unlike a session the lengths are known."""
    fa = fingerprint(a, coin, epsilon)
    fb = fingerprint(b, coin, epsilon)
    assert fa.length is not None and fb.length is not None
    return VerificationVerdict(
        decision=_decide(fa, fb),
        epsilon=fa.epsilon,
        k=fa.k,
        bits_communicated=fa.k,
        lengths_known=(fa.length, fb.length),
    )
