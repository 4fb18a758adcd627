"""
Coletor de Métricas - contadores prometheus do runner e saúde do processo
"""

import logging
import time

import psutil
from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram, generate_latest

from models.probe_record import ProbeRecord

logger = logging.getLogger("apiq")

LATENCY_BUCKETS_MS = (5, 10, 25, 50, 100, 250, 500, 1000, 2500, 5000, 10000, 30000, 60000)


class MetricsCollector:
    """
    Métricas do runner em um CollectorRegistry próprio (várias instâncias convivem nos testes)
    """

    def __init__(self, vantage: str):
        self.vantage = vantage
        self.registry = CollectorRegistry()
        self.start_time = time.monotonic()
        self._process = psutil.Process()

        self.probes_total = Counter(
            "apiq_probes_total",
            "Medições registradas por endpoint, protocolo e classe de resultado",
            ["endpoint", "protocol", "outcome"],
            registry=self.registry,
        )
        self.probe_latency = Histogram(
            "apiq_probe_latency_ms",
            "Latência das medições em milissegundos",
            ["protocol"],
            buckets=LATENCY_BUCKETS_MS,
            registry=self.registry,
        )
        self.scans_total = Counter(
            "apiq_scans_total", "Scans TLS por endpoint e resultado", ["endpoint", "result"], registry=self.registry
        )
        self.log_write_failures = Counter(
            "apiq_log_write_failures_total", "Gravações de log que esgotaram as tentativas", registry=self.registry
        )
        self.worker_restarts = Counter(
            "apiq_worker_restarts_total", "Workers reiniciados pelo supervisor", ["series"], registry=self.registry
        )
        self.uptime = Gauge("apiq_uptime_seconds", "Tempo de execução do runner", registry=self.registry)
        self.rss = Gauge("apiq_process_rss_bytes", "Memória residente do processo", registry=self.registry)

        logger.info("✅ MetricsCollector inicializado com sucesso")

    def record_probe(self, record: ProbeRecord) -> None:
        self.probes_total.labels(
            endpoint=record.endpoint_id, protocol=record.protocol.value, outcome=record.outcome.outcome_class.value
        ).inc()
        self.probe_latency.labels(protocol=record.protocol.value).observe(record.latency_ms)

    def record_scan(self, endpoint_id: str, ok: bool) -> None:
        self.scans_total.labels(endpoint=endpoint_id, result="ok" if ok else "failure").inc()

    def record_write_failure(self) -> None:
        self.log_write_failures.inc()

    def record_restart(self, series: str) -> None:
        self.worker_restarts.labels(series=series).inc()

    def uptime_s(self) -> float:
        return time.monotonic() - self.start_time

    def rss_bytes(self) -> int | None:
        try:
            return self._process.memory_info().rss
        except psutil.Error as e:
            logger.warning(f"⚠️ Falha ao ler memória do processo: {str(e)}")
            return None

    def render(self) -> bytes:
        """Exposição no formato texto do prometheus"""
        self.uptime.set(self.uptime_s())
        rss = self.rss_bytes()
        if rss is not None:
            self.rss.set(rss)
        return generate_latest(self.registry)
