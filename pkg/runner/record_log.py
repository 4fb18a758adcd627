"""
Log de registros append-only: codec de linha e escritor serializado.

Formato (campos fixos, separados por '|', vazio para ausente):
timestamp_ms|vantage|endpoint_id|protocol|latency_ms|outcome_class|status_code|bytes|packets_sent|packets_lost|detail

Log de scans TLS:
timestamp_ms|vantage|endpoint_id|server_score|suite1;suite2;...
"""

import asyncio
import logging
import os
from collections.abc import Callable
from datetime import UTC, datetime
from pathlib import Path

from pydantic import ValidationError
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt, wait_exponential

from config.constants import (
    DEFAULT_LOG_WRITE_RETRIES,
    LOG_WRITE_BACKOFF_MAX_S,
    LOG_WRITE_BACKOFF_MIN_S,
    QUARANTINE_SUFFIX,
    RECORD_FIELD_SEPARATOR,
    RECORD_LOG_SUFFIX,
    SCAN_LOG_SUFFIX,
    SUITE_SEPARATOR,
)
from models.cipher import CipherScanRecord, ScanLogEntry
from models.endpoint import Protocol
from models.errors import MalformedRecordError
from models.probe_record import OutcomeClass, ProbeOutcome, ProbeRecord

logger = logging.getLogger("apiq")

RECORD_FIELDS = 11
SCAN_FIELDS = 5


def _optional_int(value: str) -> int | None:
    return int(value) if value else None


def sanitize_detail(detail: str) -> str:
    return detail.replace(RECORD_FIELD_SEPARATOR, "/").replace("\r", " ").replace("\n", " ")


def encode_record(record: ProbeRecord) -> str:
    """Uma linha (sem '\\n') no formato de intercâmbio"""
    fields = [
        str(record.timestamp_ms),
        record.vantage,
        record.endpoint_id,
        record.protocol.value,
        f"{record.latency_ms:.3f}",
        record.outcome.outcome_class.value,
        "" if record.outcome.status_code is None else str(record.outcome.status_code),
        str(record.body_bytes),
        "" if record.packets_sent is None else str(record.packets_sent),
        "" if record.packets_lost is None else str(record.packets_lost),
        sanitize_detail(record.outcome.detail),
    ]
    return RECORD_FIELD_SEPARATOR.join(fields)


def decode_record(line: str) -> ProbeRecord:
    """
    Raises:
        MalformedRecordError: número de campos, tipos ou invariantes inválidos
    """
    fields = line.rstrip("\r\n").split(RECORD_FIELD_SEPARATOR)
    if len(fields) != RECORD_FIELDS:
        raise MalformedRecordError(f"Esperados {RECORD_FIELDS} campos, encontrados {len(fields)}")
    timestamp, vantage, endpoint_id, protocol, latency, outcome_class, status, body, sent, lost, detail = fields
    try:
        return ProbeRecord(
            timestamp_ms=int(timestamp),
            vantage=vantage,
            endpoint_id=endpoint_id,
            protocol=Protocol(protocol),
            latency_ms=float(latency),
            outcome=ProbeOutcome(
                outcome_class=OutcomeClass(outcome_class), status_code=_optional_int(status), detail=detail
            ),
            body_bytes=int(body) if body else 0,
            packets_sent=_optional_int(sent),
            packets_lost=_optional_int(lost),
        )
    except (ValueError, ValidationError) as e:
        raise MalformedRecordError(f"Registro inválido: {str(e).splitlines()[0]}") from e


def encode_scan(record: CipherScanRecord) -> str:
    fields = [
        str(record.timestamp_ms),
        record.vantage,
        record.endpoint_id,
        f"{record.server_score:.6f}",
        SUITE_SEPARATOR.join(record.suite_names),
    ]
    return RECORD_FIELD_SEPARATOR.join(fields)


def decode_scan(line: str) -> ScanLogEntry:
    fields = line.rstrip("\r\n").split(RECORD_FIELD_SEPARATOR)
    if len(fields) != SCAN_FIELDS:
        raise MalformedRecordError(f"Esperados {SCAN_FIELDS} campos no log de scans, encontrados {len(fields)}")
    timestamp, vantage, endpoint_id, score, suites = fields
    names = tuple(name for name in suites.split(SUITE_SEPARATOR) if name)
    if not names or not vantage or not endpoint_id:
        raise MalformedRecordError("Linha de scan sem suites, vantage ou endpoint")
    try:
        return ScanLogEntry(
            timestamp_ms=int(timestamp),
            vantage=vantage,
            endpoint_id=endpoint_id,
            server_score=float(score),
            suite_names=names,
        )
    except (ValueError, ValidationError) as e:
        raise MalformedRecordError(f"Linha de scan inválida: {str(e).splitlines()[0]}") from e


def log_path(log_dir: Path, vantage: str, timestamp_ms: int, suffix: str = RECORD_LOG_SUFFIX) -> Path:
    """Um arquivo por (vantage, dia UTC): YYYY-MM-DD_<vantage>.log"""
    day = datetime.fromtimestamp(timestamp_ms / 1000, tz=UTC).strftime("%Y-%m-%d")
    return Path(log_dir) / f"{day}_{vantage}{suffix}"


def quarantine_partial_tail(path: Path) -> int:
    """
    Move uma última linha incompleta (sem '\\n') para <arquivo>.quarantine.
    Retorna quantos bytes foram movidos.
    """
    if not path.exists():
        return 0
    with open(path, "rb+") as f:
        size = f.seek(0, os.SEEK_END)
        if size == 0:
            return 0
        f.seek(size - 1)
        if f.read(1) == b"\n":
            return 0
        f.seek(0)
        content = f.read()
        keep = content.rfind(b"\n") + 1
        partial = content[keep:]
        with open(path.with_name(path.name + QUARANTINE_SUFFIX), "ab") as quarantine:
            quarantine.write(partial + b"\n")
        f.truncate(keep)
    logger.warning(f"⚠️ Registro parcial em {path.name} movido para quarentena ({len(partial)} bytes)")
    return len(partial)


class RecordLogWriter:
    """
    Escritor único e serializado para os logs de um ponto de medição.
    Cada linha é gravada com fsync antes de append() retornar.
    """

    def __init__(
        self,
        log_dir: Path,
        vantage: str,
        retries: int = DEFAULT_LOG_WRITE_RETRIES,
        on_fault: Callable[[str], None] | None = None,
    ):
        self.log_dir = Path(log_dir)
        self.vantage = vantage
        self.retries = retries
        self.on_fault = on_fault
        self._lock = asyncio.Lock()
        self._checked: set[Path] = set()
        self.failed_writes = 0

    async def append(self, record: ProbeRecord) -> bool:
        path = log_path(self.log_dir, self.vantage, record.timestamp_ms, RECORD_LOG_SUFFIX)
        return await self._append_line(path, encode_record(record))

    async def append_scan(self, record: CipherScanRecord) -> bool:
        path = log_path(self.log_dir, self.vantage, record.timestamp_ms, SCAN_LOG_SUFFIX)
        return await self._append_line(path, encode_scan(record))

    async def _append_line(self, path: Path, line: str) -> bool:
        async with self._lock:
            try:
                await asyncio.to_thread(self._write_with_retry, path, line)
                return True
            except OSError as e:
                self.failed_writes += 1
                message = f"Falha ao gravar em {path.name} após {self.retries} tentativas: {str(e)}"
                logger.error(f"❌ {message}")
                if self.on_fault:
                    self.on_fault(message)
                return False

    def _write_with_retry(self, path: Path, line: str) -> None:
        retrying = Retrying(
            stop=stop_after_attempt(self.retries),
            wait=wait_exponential(multiplier=LOG_WRITE_BACKOFF_MIN_S, max=LOG_WRITE_BACKOFF_MAX_S),
            retry=retry_if_exception_type(OSError),
            reraise=True,
        )
        for attempt in retrying:
            with attempt:
                self._write_line(path, line)

    def _write_line(self, path: Path, line: str) -> None:
        if path not in self._checked:
            path.parent.mkdir(parents=True, exist_ok=True)
            quarantine_partial_tail(path)
            self._checked.add(path)
        with open(path, "a", encoding="utf-8") as f:
            f.write(line + "\n")
            f.flush()
            os.fsync(f.fileno())
