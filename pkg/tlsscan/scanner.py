"""
Enumeração da ordem de preferência de cipher suites por handshakes sucessivos.

Oferece o conjunto completo, registra a suite escolhida pelo servidor, remove-a da
oferta e repete até o handshake falhar. A sequência de escolhas é a preferência do servidor.
"""

import asyncio
import logging
import socket
import ssl

from config.constants import DEFAULT_TLS_HANDSHAKE_TIMEOUT_S
from models.cipher import CipherScanRecord, ScanFailure
from models.endpoint import EndpointSpec, Protocol
from models.errors import EmptySuiteListError, ScanUnreachableError, UnknownSuiteError
from probe.prober import now_ms
from tlsscan.classification import SuiteTable, load_suite_table
from tlsscan.scoring import score_server

logger = logging.getLogger("apiq")

FULL_OFFER = "ALL:COMPLEMENTOFALL"
SECLEVEL_ZERO = "@SECLEVEL=0"
CLIENT_ORDER_FLAG = "client-order"
MAX_HANDSHAKES = 512


def _offer(base: str, excluded: list[str]) -> str:
    return ":".join([base, *(f"!{name}" for name in excluded), SECLEVEL_ZERO])


class HandshakeProber:
    """Handshakes síncronos contra um host:porta; executado fora do event loop"""

    def __init__(self, host: str, port: int, timeout_s: float = DEFAULT_TLS_HANDSHAKE_TIMEOUT_S):
        self.host = host
        self.port = port
        self.timeout_s = timeout_s

    def _context(self, cipher_string: str | None, tls13: bool) -> ssl.SSLContext | None:
        context = ssl.SSLContext(ssl.PROTOCOL_TLS_CLIENT)
        context.check_hostname = False
        context.verify_mode = ssl.CERT_NONE
        if tls13:
            context.minimum_version = ssl.TLSVersion.TLSv1_3
            return context
        context.maximum_version = ssl.TLSVersion.TLSv1_2
        try:
            context.minimum_version = ssl.TLSVersion.TLSv1
        except (ValueError, ssl.SSLError):
            logger.debug("OpenSSL local não permite TLS 1.0; mantendo mínimo padrão")
        try:
            context.set_ciphers(cipher_string or _offer(FULL_OFFER, []))
        except ssl.SSLError:
            # nenhuma suite sobrou na oferta
            return None
        return context

    def negotiate(self, cipher_string: str | None = None, tls13: bool = False) -> str | None:
        """
        Um handshake; retorna o nome da suite escolhida ou None se o handshake falhar.

        Raises:
            ScanUnreachableError: conexão TCP não estabelecida
        """
        context = self._context(cipher_string, tls13)
        if context is None:
            return None
        try:
            sock = socket.create_connection((self.host, self.port), timeout=self.timeout_s)
        except OSError as e:
            raise ScanUnreachableError(f"{self.host}:{self.port} inalcançável: {str(e)}") from e
        try:
            with context.wrap_socket(sock, server_hostname=self.host) as tls:
                negotiated = tls.cipher()
                return negotiated[0] if negotiated else None
        except (ssl.SSLError, ConnectionError, TimeoutError, OSError) as e:
            logger.debug(f"Handshake recusado por {self.host}:{self.port}: {str(e)}")
            return None
        finally:
            sock.close()

    def enumerate(self) -> list[str]:
        picked: list[str] = []
        while len(picked) < MAX_HANDSHAKES:
            choice = self.negotiate(_offer(FULL_OFFER, picked))
            if choice is None:
                break
            if choice in picked:
                logger.warning(f"⚠️ {self.host}:{self.port} repetiu a suite {choice}; enumeração encerrada")
                break
            picked.append(choice)

        tls13_choice = self.negotiate(tls13=True)
        if tls13_choice and tls13_choice not in picked:
            # suites TLS 1.3 não são configuráveis pelo cliente: apenas a escolhida é registrada
            picked.insert(0, tls13_choice)
        return picked

    def honors_client_order(self, first: str, second: str) -> bool:
        """Oferece as duas preferidas invertidas; se o servidor seguir o cliente, a ordem é do cliente"""
        return self.negotiate(f"{second}:{first}:{SECLEVEL_ZERO}") == second


def _https_target(endpoint: EndpointSpec) -> tuple[str, int]:
    if Protocol.HTTPS not in endpoint.protocols:
        raise ValueError(f"Endpoint {endpoint.id} não mede HTTPS")
    return endpoint.host, endpoint.https_port


async def enumerate_suites(endpoint: EndpointSpec, timeout_s: float = DEFAULT_TLS_HANDSHAKE_TIMEOUT_S) -> list[str]:
    """
    Ordem de preferência do servidor (rank 1 primeiro). Lista vazia se nenhum handshake TLS vingar.

    Raises:
        ScanUnreachableError: endpoint inalcançável
    """
    host, port = _https_target(endpoint)
    return await asyncio.to_thread(HandshakeProber(host, port, timeout_s).enumerate)


async def detect_client_order(
    endpoint: EndpointSpec, suites: list[str], timeout_s: float = DEFAULT_TLS_HANDSHAKE_TIMEOUT_S
) -> bool:
    tls12 = [name for name in suites if not name.startswith("TLS_")]
    if len(tls12) < 2:
        return False
    host, port = _https_target(endpoint)
    prober = HandshakeProber(host, port, timeout_s)
    return await asyncio.to_thread(prober.honors_client_order, tls12[0], tls12[1])


async def scan_endpoint(
    endpoint: EndpointSpec,
    vantage: str,
    *,
    table: SuiteTable | None = None,
    timeout_s: float = DEFAULT_TLS_HANDSHAKE_TIMEOUT_S,
) -> CipherScanRecord | ScanFailure:
    """
    Enumera, classifica e pontua. Falhas do endpoint viram ScanFailure, nunca exceção.
    """
    table = table or load_suite_table()
    timestamp = now_ms()

    def failure(detail: str) -> ScanFailure:
        logger.warning(f"⚠️ Scan TLS de {endpoint.id} falhou: {detail}")
        return ScanFailure(timestamp_ms=timestamp, vantage=vantage, endpoint_id=endpoint.id, detail=detail)

    try:
        names = await enumerate_suites(endpoint, timeout_s)
        if not names:
            raise EmptySuiteListError("nenhuma suite negociada")
        suites = [table.classify(name) for name in names]
        client_order = await detect_client_order(endpoint, names, timeout_s)
    except ScanUnreachableError as e:
        return failure(str(e))
    except EmptySuiteListError as e:
        return failure(f"NO_SUITES: {str(e)}")
    except UnknownSuiteError as e:
        return failure(str(e))

    record = CipherScanRecord(
        timestamp_ms=timestamp,
        vantage=vantage,
        endpoint_id=endpoint.id,
        suites=suites,
        server_score=score_server(suites),
        detail=CLIENT_ORDER_FLAG if client_order else "",
    )
    logger.info(f"✅ Scan TLS de {endpoint.id}: {len(suites)} suites, score {record.server_score:.3f}")
    return record
