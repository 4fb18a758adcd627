"""
Backends de eco (ping) - utilitário ping do sistema ou eco UDP sem privilégios
"""

import asyncio
import logging
import re
import socket
import time
import uuid
from dataclasses import dataclass, field
from typing import Protocol

from config.constants import DEFAULT_PING_PACKET_TIMEOUT_S
from models.errors import IcmpPermissionError

logger = logging.getLogger("apiq")

_TRANSMITTED_RE = re.compile(r"(\d+)\s+packets? transmitted,\s+(\d+)\s+(?:packets? )?received")
_REPLY_TIME_RE = re.compile(r"time[=<]\s*([\d.]+)\s*ms")
_PERMISSION_MARKERS = ("operation not permitted", "permission denied", "socket: operation not permitted")
_DNS_MARKERS = (
    "unknown host",
    "name or service not known",
    "cannot resolve",
    "temporary failure in name resolution",
    "no address associated with hostname",
    "nodename nor servname",
)


@dataclass
class EchoResult:
    sent: int
    received: int
    rtts_ms: list[float] = field(default_factory=list)
    resolved: bool = True
    detail: str = ""

    @property
    def lost(self) -> int:
        return self.sent - self.received


class EchoBackend(Protocol):
    async def echo(self, host: str, count: int, port: int | None = None) -> EchoResult: ...


def parse_ping_output(output: str, count: int) -> EchoResult:
    """
    Interpreta a saída do ping do Linux/BSD.

    Raises:
        IcmpPermissionError: se o sistema negar o envio de ICMP
    """
    lowered = output.lower()
    if any(marker in lowered for marker in _PERMISSION_MARKERS):
        raise IcmpPermissionError(f"Sem privilégio para ICMP: {output.strip()[:200]}")
    if any(marker in lowered for marker in _DNS_MARKERS):
        return EchoResult(sent=count, received=0, resolved=False, detail=output.strip()[:200])

    match = _TRANSMITTED_RE.search(output)
    rtts = [float(value) for value in _REPLY_TIME_RE.findall(output)]
    if match is None:
        return EchoResult(sent=count, received=0, detail="saída do ping não reconhecida")
    transmitted, received = int(match.group(1)), int(match.group(2))
    # o ping pode ser interrompido antes; o que não foi transmitido conta como perdido
    sent = max(count, transmitted)
    return EchoResult(sent=sent, received=min(received, sent), rtts_ms=rtts[:received])


class SystemPingBackend:
    """Usa o ping do sistema (ICMP real), como a implementação padrão do Linux"""

    def __init__(self, binary: str = "ping", packet_timeout_s: float = DEFAULT_PING_PACKET_TIMEOUT_S):
        self.binary = binary
        self.packet_timeout_s = packet_timeout_s

    async def echo(self, host: str, count: int, port: int | None = None) -> EchoResult:
        wait = max(1, int(round(self.packet_timeout_s)))
        try:
            process = await asyncio.create_subprocess_exec(
                self.binary,
                "-n",
                "-c",
                str(count),
                "-W",
                str(wait),
                host,
                stdout=asyncio.subprocess.PIPE,
                stderr=asyncio.subprocess.STDOUT,
            )
        except FileNotFoundError:
            raise IcmpPermissionError(f"Utilitário ping não encontrado: {self.binary}")
        stdout, _ = await process.communicate()
        return parse_ping_output(stdout.decode("utf-8", errors="replace"), count)


class _EchoClientProtocol(asyncio.DatagramProtocol):
    def __init__(self):
        self.replies: asyncio.Queue[bytes] = asyncio.Queue()

    def datagram_received(self, data: bytes, addr) -> None:
        self.replies.put_nowait(data)

    def error_received(self, exc: Exception) -> None:
        logger.debug(f"Erro no socket de eco UDP: {exc}")


class UdpEchoBackend:
    """
    Substituto de ICMP sobre datagramas para ambientes sem privilégio.
    Envia os pacotes em sequência, cada um aguardando resposta ou timeout.
    """

    def __init__(self, default_port: int | None = None, packet_timeout_s: float = DEFAULT_PING_PACKET_TIMEOUT_S):
        self.default_port = default_port
        self.packet_timeout_s = packet_timeout_s

    async def echo(self, host: str, count: int, port: int | None = None) -> EchoResult:
        port = port or self.default_port
        if port is None:
            raise ValueError("UdpEchoBackend exige porta de eco")

        loop = asyncio.get_running_loop()
        try:
            infos = await loop.getaddrinfo(host, port, type=socket.SOCK_DGRAM)
        except socket.gaierror as e:
            return EchoResult(sent=count, received=0, resolved=False, detail=str(e))
        family, _, _, _, address = infos[0]

        transport, protocol = await loop.create_datagram_endpoint(
            _EchoClientProtocol, family=family, remote_addr=address
        )
        token = uuid.uuid4().hex[:12]
        rtts: list[float] = []
        try:
            for seq in range(count):
                payload = f"apiq:{token}:{seq}".encode()
                started = time.perf_counter()
                transport.sendto(payload)
                if await self._await_reply(protocol, payload):
                    rtts.append((time.perf_counter() - started) * 1000.0)
        finally:
            transport.close()
        return EchoResult(sent=count, received=len(rtts), rtts_ms=rtts)

    async def _await_reply(self, protocol: _EchoClientProtocol, payload: bytes) -> bool:
        deadline = time.perf_counter() + self.packet_timeout_s
        while True:
            remaining = deadline - time.perf_counter()
            if remaining <= 0:
                return False
            try:
                data = await asyncio.wait_for(protocol.replies.get(), timeout=remaining)
            except asyncio.TimeoutError:
                return False
            # respostas atrasadas de pacotes anteriores são descartadas
            if data == payload:
                return True
