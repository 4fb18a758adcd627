"""
Endpoint simulado guiado por um FaultPlan: HTTP, HTTPS e eco UDP (substituto de ICMP)

Os três transportes compartilham o mesmo plano e a mesma origem de relógio. O comportamento
de cada conexão é decidido no instante do accept e registrado no ground truth.
"""

import asyncio
import contextlib
import logging
import random
import socket
import ssl
import struct
import tempfile
import time
from dataclasses import dataclass
from http import HTTPStatus
from pathlib import Path

from config.constants import MOCK_TIMEOUT_HOLD_S, RESET_PARTIAL_BODY_BYTES
from mocknet.certificates import write_certificates
from models.fault_plan import (
    DEFAULT_BEHAVIOR,
    BehaviorType,
    DropTlsBehavior,
    FaultPlan,
    OkBehavior,
    PacketLossBehavior,
    ResetBehavior,
    StatusBehavior,
    TimeoutBehavior,
)

logger = logging.getLogger("apiq")

REQUEST_HEAD_LIMIT = 64 * 1024
REQUEST_READ_TIMEOUT_S = 10.0


@dataclass(frozen=True)
class GroundTruthEntry:
    offset_s: float
    transport: str
    behavior: str
    window_index: int | None
    dropped: bool | None = None

    def to_line(self) -> str:
        window = "" if self.window_index is None else str(self.window_index)
        dropped = "" if self.dropped is None else str(int(self.dropped))
        return f"{self.offset_s:.6f}|{self.transport}|{self.behavior}|{window}|{dropped}"


def build_server_context(cert_dir: Path, tls_preference: tuple[str, ...] | None = None) -> ssl.SSLContext:
    """
    Contexto TLS do mock com certificados RSA e ECDSA.
    Com tls_preference o servidor fica em TLS <= 1.2 e impõe a própria ordem de suites.

    Raises:
        ssl.SSLError: nenhuma suite da preferência é suportada pela biblioteca TLS local
    """
    pairs = write_certificates(cert_dir)
    context = ssl.SSLContext(ssl.PROTOCOL_TLS_SERVER)
    for cert_path, key_path in pairs.values():
        context.load_cert_chain(cert_path, key_path)
    if tls_preference:
        context.maximum_version = ssl.TLSVersion.TLSv1_2
        with contextlib.suppress(ValueError, ssl.SSLError):
            context.minimum_version = ssl.TLSVersion.TLSv1
        context.set_ciphers(":".join(tls_preference) + ":@SECLEVEL=0")
        context.options |= ssl.OP_CIPHER_SERVER_PREFERENCE
    return context


def _response(status: int, body: bytes, extra_headers: dict[str, str] | None = None) -> bytes:
    try:
        reason = HTTPStatus(status).phrase
    except ValueError:
        reason = "Unknown"
    headers = {
        "Content-Type": "application/octet-stream",
        "Content-Length": str(len(body)),
        "Cache-Control": "no-store",
        "Connection": "close",
        **(extra_headers or {}),
    }
    head = f"HTTP/1.1 {status} {reason}\r\n" + "".join(f"{k}: {v}\r\n" for k, v in headers.items()) + "\r\n"
    return head.encode("latin-1") + body


async def _read_request_head(reader: asyncio.StreamReader) -> bytes:
    return await asyncio.wait_for(reader.readuntil(b"\r\n\r\n"), timeout=REQUEST_READ_TIMEOUT_S)


def _abort_with_reset(writer: asyncio.StreamWriter) -> None:
    sock = writer.get_extra_info("socket")
    if sock is not None:
        with contextlib.suppress(OSError):
            sock.setsockopt(socket.SOL_SOCKET, socket.SO_LINGER, struct.pack("ii", 1, 0))
    writer.transport.abort()


def window_rng(seed: int | None, window_index: int) -> random.Random:
    """Gerador de perdas de uma janela; o oráculo reproduz a mesma sequência"""
    return random.Random(f"{seed}:{window_index}" if seed is not None else None)


class _EchoServerProtocol(asyncio.DatagramProtocol):
    def __init__(self, endpoint: "MockEndpoint"):
        self.endpoint = endpoint
        self.transport: asyncio.DatagramTransport | None = None

    def connection_made(self, transport) -> None:
        self.transport = transport

    def datagram_received(self, data: bytes, addr) -> None:
        if self.endpoint.should_drop_echo() or self.transport is None:
            return
        self.transport.sendto(data, addr)


class MockEndpoint:
    """
    Frota mínima de um endpoint: HTTP, HTTPS (opcional) e eco UDP (opcional).
    Porta 0 escolhe uma porta livre; as portas reais ficam disponíveis após start().
    """

    def __init__(
        self,
        plan: FaultPlan,
        *,
        host: str = "127.0.0.1",
        http_port: int | None = 0,
        https_port: int | None = None,
        echo_port: int | None = None,
        cert_dir: str | Path | None = None,
        ground_truth_path: str | Path | None = None,
    ):
        if http_port is None and https_port is None and echo_port is None:
            raise ValueError("MockEndpoint precisa de ao menos um transporte")
        self.plan = plan
        self.host = host
        self._requested = {"HTTP": http_port, "HTTPS": https_port, "ECHO": echo_port}
        self._cert_dir = Path(cert_dir) if cert_dir else None
        self._temp_dir: tempfile.TemporaryDirectory | None = None
        self.ground_truth_path = Path(ground_truth_path) if ground_truth_path else None
        self.ground_truth: list[GroundTruthEntry] = []
        self.ports: dict[str, int] = {}
        self.origin: float | None = None
        self.origin_wall_ms: int | None = None
        self._servers: list[asyncio.AbstractServer] = []
        self._echo_transport: asyncio.DatagramTransport | None = None
        self._connections: set[asyncio.Task] = set()
        self._loss_rngs: dict[int, random.Random] = {}
        self._tls_context: ssl.SSLContext | None = None

        if plan.has_packet_loss and plan.seed is None:
            logger.warning("⚠️ Plano com PACKET_LOSS sem @seed: perdas não reproduzíveis pelo oráculo")

    @property
    def http_port(self) -> int | None:
        return self.ports.get("HTTP")

    @property
    def https_port(self) -> int | None:
        return self.ports.get("HTTPS")

    @property
    def echo_port(self) -> int | None:
        return self.ports.get("ECHO")

    def offset_s(self) -> float:
        if self.origin is None:
            raise RuntimeError("MockEndpoint não iniciado")
        return time.monotonic() - self.origin

    def _record(
        self, offset: float, transport: str, behavior: BehaviorType, index: int | None, dropped: bool | None = None
    ) -> None:
        self.ground_truth.append(
            GroundTruthEntry(
                offset_s=offset,
                transport=transport,
                behavior=behavior.render(),
                window_index=index,
                dropped=dropped,
            )
        )

    def _loss_rng(self, index: int) -> random.Random:
        if index not in self._loss_rngs:
            self._loss_rngs[index] = window_rng(self.plan.seed, index)
        return self._loss_rngs[index]

    def should_drop_echo(self) -> bool:
        offset = self.offset_s()
        index, behavior = self.plan.window_at(offset)
        dropped = False
        if isinstance(behavior, PacketLossBehavior) and index is not None:
            dropped = self._loss_rng(index).random() < behavior.fraction
        self._record(offset, "ECHO", behavior, index, dropped)
        return dropped

    async def start(self) -> "MockEndpoint":
        loop = asyncio.get_running_loop()
        if self._requested["HTTPS"] is not None:
            if self._cert_dir is None:
                self._temp_dir = tempfile.TemporaryDirectory(prefix="apiq-mock-")
                self._cert_dir = Path(self._temp_dir.name)
            self._tls_context = build_server_context(self._cert_dir, self.plan.tls_preference)

        self.origin = time.monotonic()
        self.origin_wall_ms = time.time_ns() // 1_000_000

        for transport in ("HTTP", "HTTPS"):
            port = self._requested[transport]
            if port is None:
                continue
            tls = transport == "HTTPS"
            server = await asyncio.start_server(
                lambda r, w, tls=tls: self._spawn(r, w, tls),
                host=self.host,
                port=port,
                reuse_address=True,
                limit=REQUEST_HEAD_LIMIT,
            )
            self._servers.append(server)
            self.ports[transport] = server.sockets[0].getsockname()[1]

        if self._requested["ECHO"] is not None:
            self._echo_transport, _ = await loop.create_datagram_endpoint(
                lambda: _EchoServerProtocol(self), local_addr=(self.host, self._requested["ECHO"])
            )
            self.ports["ECHO"] = self._echo_transport.get_extra_info("sockname")[1]

        logger.info(
            f"✅ Mock ativo em {self.host}: "
            + ", ".join(f"{name}={port}" for name, port in sorted(self.ports.items()))
            + f" ({len(self.plan.windows)} janelas)"
        )
        return self

    async def stop(self) -> None:
        for server in self._servers:
            server.close()
        for task in list(self._connections):
            task.cancel()
        if self._connections:
            await asyncio.gather(*self._connections, return_exceptions=True)
        for server in self._servers:
            with contextlib.suppress(Exception):
                await server.wait_closed()
        self._servers.clear()
        if self._echo_transport is not None:
            self._echo_transport.close()
            self._echo_transport = None
        if self.ground_truth_path is not None:
            self.write_ground_truth(self.ground_truth_path)
        if self._temp_dir is not None:
            self._temp_dir.cleanup()
            self._temp_dir = None
        logger.info(f"Mock encerrado ({len(self.ground_truth)} eventos no ground truth)")

    async def __aenter__(self) -> "MockEndpoint":
        return await self.start()

    async def __aexit__(self, *exc) -> None:
        await self.stop()

    def write_ground_truth(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("".join(entry.to_line() + "\n" for entry in self.ground_truth), encoding="utf-8")
        return path

    def _spawn(self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter, tls: bool) -> None:
        task = asyncio.create_task(self._handle(reader, writer, tls))
        self._connections.add(task)
        task.add_done_callback(self._connections.discard)

    async def _handle(self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter, tls: bool) -> None:
        transport = "HTTPS" if tls else "HTTP"
        offset = self.offset_s()
        index, behavior = self.plan.window_at(offset)
        if isinstance(behavior, PacketLossBehavior):
            # perda de pacotes afeta só o eco; TCP serve o padrão
            behavior = DEFAULT_BEHAVIOR
        self._record(offset, transport, behavior, index)

        try:
            if isinstance(behavior, DropTlsBehavior):
                writer.transport.abort()
                return
            if tls:
                await writer.start_tls(self._tls_context)
            await _read_request_head(reader)
            await self._respond(reader, writer, behavior)
        except (ConnectionError, ssl.SSLError, asyncio.IncompleteReadError, asyncio.LimitOverrunError, TimeoutError):
            pass
        except asyncio.CancelledError:
            writer.transport.abort()
            raise
        except Exception as e:
            logger.error(f"❌ Erro inesperado no mock ({transport}): {str(e)}")
        finally:
            if not writer.transport.is_closing():
                writer.close()
                with contextlib.suppress(Exception):
                    await writer.wait_closed()

    async def _respond(
        self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter, behavior: BehaviorType
    ) -> None:
        if isinstance(behavior, OkBehavior):
            await asyncio.sleep(behavior.delay_ms / 1000.0)
            writer.write(_response(behavior.status, b"x" * behavior.body_bytes))
            await writer.drain()
        elif isinstance(behavior, StatusBehavior):
            extra = {"Location": "/"} if 300 <= behavior.code <= 399 else None
            writer.write(_response(behavior.code, b"", extra))
            await writer.drain()
        elif isinstance(behavior, TimeoutBehavior):
            # segura a conexão até o cliente desistir
            with contextlib.suppress(TimeoutError):
                await asyncio.wait_for(reader.read(), timeout=MOCK_TIMEOUT_HOLD_S)
        elif isinstance(behavior, ResetBehavior):
            promised = RESET_PARTIAL_BODY_BYTES * 64
            head = _response(200, b"", {"Content-Length": str(promised)})
            writer.write(head + b"x" * RESET_PARTIAL_BODY_BYTES)
            await writer.drain()
            _abort_with_reset(writer)


async def serve(
    plan: FaultPlan,
    port: int,
    *,
    host: str = "127.0.0.1",
    tls_port: int | None = None,
    echo_port: int | None = None,
    cert_dir: str | Path | None = None,
    ground_truth_path: str | Path | None = None,
    stop_event: asyncio.Event | None = None,
) -> MockEndpoint:
    """Serve o plano até stop_event (ou cancelamento); retorna o endpoint com o ground truth"""
    stop_event = stop_event or asyncio.Event()
    endpoint = MockEndpoint(
        plan,
        host=host,
        http_port=port,
        https_port=tls_port,
        echo_port=echo_port,
        cert_dir=cert_dir,
        ground_truth_path=ground_truth_path,
    )
    await endpoint.start()
    try:
        await stop_event.wait()
    finally:
        await endpoint.stop()
    return endpoint
