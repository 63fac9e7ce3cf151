# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

"""Reliable ordered byte channels the verification protocol runs over."""

import queue
import socket
import threading
from typing import Optional, Protocol

from loguru import logger
from nbl.cli_utils.errors import AppConfigurationError

from ..errors import TransportError
from .messages import HEADER_SIZE, ProtocolMessage, decode_payload, encode, parse_header

DEFAULT_TIMEOUT = 30.0


class Channel(Protocol):
    @property
    def transport_bytes(self) -> int:
        """Total number of bytes sent and received so far."""
        ...

    def send(self, data: bytes) -> None: ...

    def recv_exact(self, n: int) -> bytes: ...

    def close(self) -> None: ...


def write_message(channel: Channel, message: ProtocolMessage) -> None:
    logger.debug("Sending {kind}", kind=message.kind.name)
    channel.send(encode(message))


def read_message(channel: Channel) -> ProtocolMessage:
    kind, length = parse_header(channel.recv_exact(HEADER_SIZE))
    message = decode_payload(kind, channel.recv_exact(length))
    logger.debug("Received {kind}", kind=kind.name)
    return message


class LoopbackChannel:
    """One end of an in-process channel pair, safe to use from two threads."""

    def __init__(
        self,
        inbox: "queue.Queue[Optional[bytes]]",
        outbox: "queue.Queue[Optional[bytes]]",
        timeout: float = DEFAULT_TIMEOUT,
    ):
        self._inbox = inbox
        self._outbox = outbox
        self._timeout = timeout
        self._buffer = bytearray()
        self._closed = False
        self._peer_closed = False
        self._lock = threading.Lock()
        self._transport_bytes = 0

    @classmethod
    def pair(
        cls, timeout: float = DEFAULT_TIMEOUT
    ) -> tuple["LoopbackChannel", "LoopbackChannel"]:
        a_to_b: "queue.Queue[Optional[bytes]]" = queue.Queue()
        b_to_a: "queue.Queue[Optional[bytes]]" = queue.Queue()
        return cls(b_to_a, a_to_b, timeout), cls(a_to_b, b_to_a, timeout)

    @property
    def transport_bytes(self) -> int:
        return self._transport_bytes

    def send(self, data: bytes) -> None:
        with self._lock:
            if self._closed:
                raise TransportError("Cannot send on a closed channel.")
            self._transport_bytes += len(data)
        self._outbox.put(bytes(data))

    def recv_exact(self, n: int) -> bytes:
        while len(self._buffer) < n:
            if self._peer_closed:
                raise TransportError(
                    f"Channel closed by peer after {len(self._buffer)} of {n} bytes."
                )
            try:
                chunk = self._inbox.get(timeout=self._timeout)
            except queue.Empty:
                raise TransportError(
                    f"Timed out after {self._timeout}s waiting for data."
                ) from None
            if chunk is None:
                self._peer_closed = True
            else:
                self._buffer.extend(chunk)
        data = bytes(self._buffer[:n])
        del self._buffer[:n]
        self._transport_bytes += n
        return data

    def close(self) -> None:
        with self._lock:
            if self._closed:
                return
            self._closed = True
        self._outbox.put(None)


class TcpChannel:
    def __init__(self, sock: socket.socket, timeout: Optional[float] = DEFAULT_TIMEOUT):
        self._sock = sock
        self._sock.settimeout(timeout)
        self._transport_bytes = 0

    @property
    def transport_bytes(self) -> int:
        return self._transport_bytes

    @property
    def peer(self) -> str:
        try:
            host, port = self._sock.getpeername()[:2]
        except (OSError, ValueError):
            return "<disconnected>"
        return f"{host}:{port}"

    def send(self, data: bytes) -> None:
        try:
            self._sock.sendall(data)
        except OSError as e:
            raise TransportError(f"Sending to {self.peer} failed: {e}") from e
        self._transport_bytes += len(data)

    def recv_exact(self, n: int) -> bytes:
        buffer = bytearray()
        while len(buffer) < n:
            try:
                chunk = self._sock.recv(n - len(buffer))
            except OSError as e:
                raise TransportError(f"Receiving failed: {e}") from e
            if not chunk:
                raise TransportError(
                    f"Connection closed by peer after {len(buffer)} of {n} bytes."
                )
            buffer.extend(chunk)
        self._transport_bytes += n
        return bytes(buffer)

    def close(self) -> None:
        try:
            self._sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        self._sock.close()

    def __enter__(self) -> "TcpChannel":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


def parse_address(address: str, default_host: str = "127.0.0.1") -> tuple[str, int]:
    """Parse ``host:port`` (or ``:port``); IPv6 hosts use brackets, e.g. ``[::1]:4000``."""
    host, sep, port = address.rpartition(":")
    if not sep or not port.isdigit() or not 0 <= int(port) <= 65535:
        raise AppConfigurationError(f"Invalid address `{address}`, expected HOST:PORT.")
    host = host.strip("[]") or default_host
    return host, int(port)


def connect_tcp(address: str, timeout: float = DEFAULT_TIMEOUT) -> TcpChannel:
    host, port = parse_address(address)
    logger.debug("Connecting to {host}:{port}", host=host, port=port)
    try:
        sock = socket.create_connection((host, port), timeout=timeout)
    except OSError as e:
        raise TransportError(f"Could not connect to {host}:{port}: {e}") from e
    return TcpChannel(sock, timeout)
