"""
Medições individuais ICMP, HTTP e HTTPS contra um endpoint.

Toda chamada produz exatamente um ProbeRecord: falhas do endpoint são dados, não exceções.
A única exceção que escapa é IcmpPermissionError, que é erro de configuração do runner.
"""

import asyncio
import errno
import logging
import socket
import ssl
import time
from dataclasses import dataclass, field

import aiohttp

from config.constants import DEFAULT_HTTP_TIMEOUT_MS, DEFAULT_PING_PACKETS, NO_CACHE_HEADERS
from models.endpoint import EndpointSpec, Protocol
from models.errors import IcmpPermissionError
from models.probe_record import FailureKind, OutcomeClass, ProbeOutcome, ProbeRecord
from probe.classifier import classify_outcome
from probe.echo import EchoBackend, SystemPingBackend

logger = logging.getLogger("apiq")

_CONNECT_ERRNOS = {errno.ECONNREFUSED, errno.EHOSTUNREACH, errno.ENETUNREACH, errno.ETIMEDOUT, errno.EADDRNOTAVAIL}


def now_ms() -> int:
    """Relógio de parede apenas para o campo timestamp"""
    return time.time_ns() // 1_000_000


@dataclass
class ProbeSettings:
    vantage: str
    timeout_ms: int = DEFAULT_HTTP_TIMEOUT_MS
    ping_packets: int = DEFAULT_PING_PACKETS
    echo_backend: EchoBackend = field(default_factory=SystemPingBackend)
    trust_insecure_tls: bool = False


def build_ssl_context(trust_insecure: bool = False) -> ssl.SSLContext:
    context = ssl.create_default_context()
    if trust_insecure:
        # somente testes contra certificados autoassinados do mocknet
        context.check_hostname = False
        context.verify_mode = ssl.CERT_NONE
    return context


async def ping_probe(
    endpoint: EndpointSpec,
    packet_count: int = DEFAULT_PING_PACKETS,
    *,
    vantage: str,
    backend: EchoBackend | None = None,
) -> ProbeRecord:
    """
    Envia packet_count ecos; SUCCESS se ao menos um for respondido.

    Raises:
        IcmpPermissionError: sem privilégio para ICMP (aborta a execução)
    """
    if Protocol.ICMP not in endpoint.protocols:
        raise ValueError(f"Endpoint {endpoint.id} não mede ICMP")
    if packet_count < 1:
        raise ValueError("packet_count deve ser >= 1")

    backend = backend or SystemPingBackend()
    timestamp = now_ms()
    started = time.perf_counter()
    try:
        result = await backend.echo(endpoint.host, packet_count, endpoint.echo_port)
    except IcmpPermissionError:
        raise
    except Exception as e:
        logger.warning(f"⚠️ Backend de eco falhou para {endpoint.id}: {str(e)}")
        result = None
    elapsed_ms = (time.perf_counter() - started) * 1000.0

    if result is None:
        outcome = classify_outcome(failure_kind=FailureKind.NO_ECHO, detail="falha no backend de eco")
        return ProbeRecord(
            timestamp_ms=timestamp,
            vantage=vantage,
            endpoint_id=endpoint.id,
            protocol=Protocol.ICMP,
            latency_ms=elapsed_ms,
            outcome=outcome,
            packets_sent=packet_count,
            packets_lost=packet_count,
        )

    sent = result.sent
    lost = min(result.lost, sent)
    if not result.resolved:
        outcome = classify_outcome(failure_kind=FailureKind.DNS, detail=result.detail)
        latency = elapsed_ms
    elif lost < sent:
        outcome = ProbeOutcome(outcome_class=OutcomeClass.SUCCESS, detail=result.detail)
        latency = sum(result.rtts_ms) / len(result.rtts_ms) if result.rtts_ms else elapsed_ms
    else:
        outcome = classify_outcome(failure_kind=FailureKind.NO_ECHO, detail=result.detail or "sem resposta de eco")
        latency = elapsed_ms

    return ProbeRecord(
        timestamp_ms=timestamp,
        vantage=vantage,
        endpoint_id=endpoint.id,
        protocol=Protocol.ICMP,
        latency_ms=latency,
        outcome=outcome,
        packets_sent=sent,
        packets_lost=lost,
    )


def _connector_failure(error: aiohttp.ClientConnectorError, scheme: Protocol) -> FailureKind:
    os_error = getattr(error, "os_error", None)
    if isinstance(os_error, socket.gaierror):
        return FailureKind.DNS
    if isinstance(os_error, ConnectionRefusedError) or getattr(os_error, "errno", None) in _CONNECT_ERRNOS:
        return FailureKind.CONNECT
    # conexão TCP aceita e derrubada durante o handshake
    if scheme == Protocol.HTTPS and isinstance(os_error, (ConnectionResetError, ConnectionAbortedError, ssl.SSLError)):
        return FailureKind.TLS
    return FailureKind.CONNECT


def classify_exception(error: BaseException, scheme: Protocol) -> FailureKind:
    """Mapeia exceções do aiohttp na taxonomia de falhas sem código de status"""
    dns_error = getattr(aiohttp, "ClientConnectorDNSError", None)
    if dns_error is not None and isinstance(error, dns_error):
        return FailureKind.DNS
    if isinstance(error, (aiohttp.ClientSSLError, aiohttp.ClientConnectorCertificateError)):
        return FailureKind.TLS
    if isinstance(error, aiohttp.ClientConnectorError):
        return _connector_failure(error, scheme)
    if isinstance(error, asyncio.TimeoutError):
        return FailureKind.TIMEOUT
    if isinstance(error, ssl.SSLError):
        return FailureKind.TLS
    return FailureKind.DISCONNECT


async def http_probe(
    endpoint: EndpointSpec,
    scheme: Protocol,
    timeout_ms: int = DEFAULT_HTTP_TIMEOUT_MS,
    *,
    vantage: str,
    trust_insecure_tls: bool = False,
) -> ProbeRecord:
    """
    Um GET com conexão nova, sem cache e sem seguir redirecionamentos.
    A latência cobre DNS + connect (+ handshake TLS) + requisição + leitura completa do corpo.
    """
    if scheme not in (Protocol.HTTP, Protocol.HTTPS):
        raise ValueError(f"Esquema inválido para http_probe: {scheme}")
    if scheme not in endpoint.protocols:
        raise ValueError(f"Endpoint {endpoint.id} não mede {scheme.value}")
    if timeout_ms <= 0:
        raise ValueError("timeout_ms deve ser > 0")

    url = endpoint.url_for(scheme)
    ssl_context = build_ssl_context(trust_insecure_tls) if scheme == Protocol.HTTPS else False
    timeout = aiohttp.ClientTimeout(total=timeout_ms / 1000.0)
    timestamp = now_ms()
    started = time.perf_counter()
    body_bytes = 0

    try:
        connector = aiohttp.TCPConnector(force_close=True, use_dns_cache=False, ssl=ssl_context)
        async with aiohttp.ClientSession(connector=connector, timeout=timeout) as session:
            async with session.get(url, headers=NO_CACHE_HEADERS, allow_redirects=False) as response:
                body = await response.read()
                status = response.status
        latency = (time.perf_counter() - started) * 1000.0
        body_bytes = len(body)
        outcome = classify_outcome(status_code=status)
    except Exception as e:
        latency = (time.perf_counter() - started) * 1000.0
        kind = classify_exception(e, scheme)
        if kind == FailureKind.TIMEOUT:
            latency = max(latency, float(timeout_ms))
        outcome = classify_outcome(failure_kind=kind, detail=f"{type(e).__name__}: {str(e)}"[:300])

    return ProbeRecord(
        timestamp_ms=timestamp,
        vantage=vantage,
        endpoint_id=endpoint.id,
        protocol=scheme,
        latency_ms=latency,
        outcome=outcome,
        body_bytes=body_bytes,
    )


async def probe_endpoint(endpoint: EndpointSpec, protocol: Protocol, settings: ProbeSettings) -> ProbeRecord:
    """Despacha para ping_probe ou http_probe"""
    if protocol == Protocol.ICMP:
        return await ping_probe(
            endpoint, settings.ping_packets, vantage=settings.vantage, backend=settings.echo_backend
        )
    return await http_probe(
        endpoint,
        protocol,
        settings.timeout_ms,
        vantage=settings.vantage,
        trust_insecure_tls=settings.trust_insecure_tls,
    )
