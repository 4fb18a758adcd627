"""
Estado de saúde do runner: última medição por série, falhas e staleness
"""

import logging
import threading
import time
from collections import deque

from config.constants import STALENESS_FACTOR
from models.endpoint import Protocol
from models.probe_record import ProbeRecord
from models.run_config import HealthSnapshot, SeriesStatus
from monitoring.metrics_collector import MetricsCollector

logger = logging.getLogger("apiq")

MAX_FAULTS = 50


def staleness(
    snapshot: HealthSnapshot, now_ms: int, interval_s: int, factor: float = STALENESS_FACTOR
) -> list[SeriesStatus]:
    """Séries cuja última medição é mais antiga que factor * intervalo"""
    limit_ms = factor * interval_s * 1000
    return [status for status in snapshot.series if now_ms - status.timestamp_ms > limit_ms]


class HealthState:
    """
    Visão compartilhada, atualizada a cada registro confirmado no log.
    Leituras e escritas trocam entradas inteiras sob um lock.
    """

    def __init__(self, vantage: str, probe_interval_s: int, metrics: MetricsCollector | None = None):
        self.vantage = vantage
        self.probe_interval_s = probe_interval_s
        self.metrics = metrics
        self._lock = threading.Lock()
        self._latest: dict[tuple[str, Protocol], ProbeRecord] = {}
        self._faults: deque[str] = deque(maxlen=MAX_FAULTS)
        self._scan_errors: dict[str, str] = {}
        self._started = time.monotonic()

    def commit(self, record: ProbeRecord) -> None:
        with self._lock:
            self._latest[(record.endpoint_id, record.protocol)] = record

    def add_fault(self, message: str) -> None:
        with self._lock:
            self._faults.append(message)

    def scan_failed(self, endpoint_id: str, detail: str) -> None:
        with self._lock:
            self._scan_errors[endpoint_id] = detail

    def scan_succeeded(self, endpoint_id: str) -> None:
        with self._lock:
            self._scan_errors.pop(endpoint_id, None)

    def latest(self, endpoint_id: str, protocol: Protocol) -> ProbeRecord | None:
        with self._lock:
            return self._latest.get((endpoint_id, protocol))

    def snapshot(self, now_ms: int | None = None) -> HealthSnapshot:
        now_ms = time.time_ns() // 1_000_000 if now_ms is None else now_ms
        with self._lock:
            records = sorted(self._latest.values(), key=lambda r: (r.endpoint_id, r.protocol.value))
            faults = list(self._faults)
            scan_errors = dict(self._scan_errors)

        limit_ms = STALENESS_FACTOR * self.probe_interval_s * 1000
        series = [
            SeriesStatus(
                endpoint_id=record.endpoint_id,
                protocol=record.protocol,
                timestamp_ms=record.timestamp_ms,
                outcome_class=record.outcome.outcome_class,
                latency_ms=record.latency_ms,
                age_s=max(0.0, (now_ms - record.timestamp_ms) / 1000.0),
                stale=now_ms - record.timestamp_ms > limit_ms,
            )
            for record in records
        ]
        return HealthSnapshot(
            vantage=self.vantage,
            generated_at_ms=now_ms,
            probe_interval_s=self.probe_interval_s,
            series=series,
            faults=faults,
            last_scan_errors=scan_errors,
            uptime_s=self.metrics.uptime_s() if self.metrics else time.monotonic() - self._started,
            rss_bytes=self.metrics.rss_bytes() if self.metrics else None,
        )
