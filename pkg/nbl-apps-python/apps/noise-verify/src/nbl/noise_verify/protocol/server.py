# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

"""TCP binding for the responder side: one independent session per connection."""

import queue
import socketserver
from typing import Callable, ContextManager, Optional, Union

from loguru import logger
from nbl.cli_utils.errors import AppFailure

from ..common_coin import CoinSource
from ..errors import TransportError
from ..rtw_logic import BitSource
from .session import VerificationVerdict, run_responder
from .transport import DEFAULT_TIMEOUT, TcpChannel, parse_address

SourceOpener = Callable[[], ContextManager[BitSource]]
Outcome = Union[VerificationVerdict, Exception]


class _SessionHandler(socketserver.BaseRequestHandler):
    server: "VerificationServer"

    def handle(self) -> None:
        channel = TcpChannel(self.request, self.server.session_timeout)
        peer = channel.peer
        logger.info("Session with {peer} started", peer=peer)
        outcome: Outcome
        try:
            with self.server.open_source() as source:
                outcome = run_responder(
                    source, self.server.coin, self.server.epsilon, channel
                )
        except AppFailure as e:
            logger.error("Session with {peer} failed: {reason}", peer=peer, reason=str(e))
            outcome = e
        except Exception as e:
            logger.opt(exception=True).error("Session with {peer} crashed", peer=peer)
            outcome = e
        self.server.report(outcome)


class VerificationServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(
        self,
        address: tuple[str, int],
        open_source: SourceOpener,
        coin: CoinSource,
        epsilon: Optional[float] = None,
        session_timeout: float = DEFAULT_TIMEOUT,
    ):
        super().__init__(address, _SessionHandler)
        self.open_source = open_source
        self.coin = coin
        self.epsilon = epsilon
        self.session_timeout = session_timeout
        self._waiting: Optional["queue.Queue[Outcome]"] = None

    @property
    def address(self) -> str:
        host, port = self.server_address[:2]
        return f"{host}:{port}"

    def report(self, outcome: Outcome) -> None:
        if self._waiting is not None:
            self._waiting.put(outcome)

    def serve_once(self) -> VerificationVerdict:
        """Accept one connection, run its session and return the verdict."""
        self._waiting = queue.Queue()
        self.handle_request()
        outcome = self._waiting.get()
        self._waiting = None
        if isinstance(outcome, Exception):
            raise outcome
        return outcome


def serve_tcp(
    address: str,
    open_source: SourceOpener,
    coin: CoinSource,
    epsilon: Optional[float] = None,
    once: bool = False,
) -> Optional[VerificationVerdict]:
    """
    Listen on `address` and answer verification sessions.

    With `once` a single session is served and its verdict returned,
    otherwise sessions are served concurrently until interrupted.
    """
    host, port = parse_address(address, default_host="0.0.0.0")
    try:
        server = VerificationServer((host, port), open_source, coin, epsilon)
    except OSError as e:
        raise TransportError(f"Could not listen on {host}:{port}: {e}") from e
    with server:
        logger.info("Listening on {address}", address=server.address)
        if once:
            return server.serve_once()
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            logger.info("Shutting down")
    return None
