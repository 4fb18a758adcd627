"""
Daemon de medição: um worker por série (endpoint, protocolo), um worker de scans TLS,
um escritor serializado e o servidor de saúde no mesmo event loop.
"""

import asyncio
import logging
import signal

import uvicorn

from api.server import create_app
from config.constants import SCAN_LOG_SUFFIX
from models.cipher import CipherScanRecord, ScanFailure
from models.endpoint import EndpointSpec, Protocol
from models.probe_record import ProbeRecord
from models.run_config import RunConfig
from monitoring.metrics_collector import MetricsCollector
from probe.echo import EchoBackend, SystemPingBackend, UdpEchoBackend
from probe.prober import ProbeSettings, probe_endpoint
from runner.health import HealthState
from runner.record_log import RecordLogWriter
from runner.scheduler import PeriodicWorker, Supervisor, assign_phases, series_phase_ms
from tlsscan.classification import SuiteTable, load_suite_table
from tlsscan.scanner import scan_endpoint

logger = logging.getLogger("apiq")

SCAN_WORKER_KEY = ("*", "TLS-SCAN")


def build_echo_backend(config: RunConfig) -> EchoBackend:
    if config.ping_backend == "udp":
        return UdpEchoBackend()
    return SystemPingBackend()


class ProbeDaemon:
    """
    Orquestra medições e scans de um ponto de medição.

    Cada registro é gravado (com fsync) antes de atualizar o snapshot de saúde;
    a próxima medição da série só começa depois disso.
    """

    def __init__(
        self,
        config: RunConfig,
        *,
        echo_backend: EchoBackend | None = None,
        suite_table: SuiteTable | None = None,
        serve_health: bool = True,
    ):
        self.config = config
        self.serve_health = serve_health
        self.metrics = MetricsCollector(config.vantage)
        self.health = HealthState(config.vantage, config.probe_interval_s, self.metrics)
        self.writer = RecordLogWriter(
            config.log_dir, config.vantage, retries=config.log_write_retries, on_fault=self._on_write_fault
        )
        self.settings = ProbeSettings(
            vantage=config.vantage,
            timeout_ms=config.timeout_ms,
            ping_packets=config.ping_packets,
            echo_backend=echo_backend or build_echo_backend(config),
            trust_insecure_tls=config.trust_insecure_tls,
        )
        self.suite_table = suite_table
        self.supervisor = Supervisor(on_restart=lambda name, _: self.metrics.record_restart(name))
        self.phases = assign_phases(
            ((endpoint.id, protocol.value) for endpoint, protocol in config.series()),
            config.probe_interval_s,
            config.stagger,
        )
        self._stop = asyncio.Event()
        self._health_server: uvicorn.Server | None = None
        self._build_workers()

    def _on_write_fault(self, message: str) -> None:
        self.health.add_fault(message)
        self.metrics.record_write_failure()

    def _build_workers(self) -> None:
        budget_s = self.config.timeout_ms / 1000.0
        for endpoint, protocol in self.config.series():
            name = f"{endpoint.id}/{protocol.value}"
            worker = PeriodicWorker(
                name,
                self.config.probe_interval_s,
                self.phases[(endpoint.id, protocol.value)],
                self._probe_action(endpoint, protocol),
                action_budget_s=budget_s,
            )
            self.supervisor.add((endpoint.id, protocol), worker)

        if self.https_endpoints:
            scan_worker = PeriodicWorker(
                "tls-scan",
                self.config.scan_interval_s,
                series_phase_ms(*SCAN_WORKER_KEY, self.config.scan_interval_s),
                self.scan_all,
                action_budget_s=budget_s * len(self.https_endpoints),
            )
            self.supervisor.add(SCAN_WORKER_KEY, scan_worker)

    @property
    def https_endpoints(self) -> list[EndpointSpec]:
        return [endpoint for endpoint in self.config.endpoints if Protocol.HTTPS in endpoint.protocols]

    def _probe_action(self, endpoint: EndpointSpec, protocol: Protocol):
        async def action() -> None:
            await self.probe_once(endpoint, protocol)

        return action

    async def probe_once(self, endpoint: EndpointSpec, protocol: Protocol) -> ProbeRecord | None:
        """Mede, grava e publica; retorna None se a gravação falhar (sem registro fabricado)"""
        record = await probe_endpoint(endpoint, protocol, self.settings)
        if not await self.writer.append(record):
            return None
        self.health.commit(record)
        self.metrics.record_probe(record)
        return record

    async def scan_once(self, endpoint: EndpointSpec) -> CipherScanRecord | ScanFailure:
        table = self.suite_table or load_suite_table()
        result = await scan_endpoint(endpoint, self.config.vantage, table=table)
        if isinstance(result, ScanFailure):
            # falhas de scan ficam fora do log de intercâmbio
            self.health.scan_failed(endpoint.id, result.detail)
            self.metrics.record_scan(endpoint.id, ok=False)
            return result
        if await self.writer.append_scan(result):
            self.health.scan_succeeded(endpoint.id)
            self.metrics.record_scan(endpoint.id, ok=True)
        return result

    async def scan_all(self) -> list[CipherScanRecord | ScanFailure]:
        return list(await asyncio.gather(*(self.scan_once(endpoint) for endpoint in self.https_endpoints)))

    def request_stop(self) -> None:
        if not self._stop.is_set():
            logger.info("Sinal de parada recebido; encerrando o runner")
        self._stop.set()

    def _install_signal_handlers(self) -> None:
        loop = asyncio.get_running_loop()
        for sig in (signal.SIGINT, signal.SIGTERM):
            try:
                loop.add_signal_handler(sig, self.request_stop)
            except (NotImplementedError, RuntimeError):
                logger.debug(f"Sinal {sig.name} não suportado neste loop")

    async def _start_health_server(self) -> asyncio.Task | None:
        if not self.serve_health:
            return None
        app = create_app(self.health, self.metrics)
        config = uvicorn.Config(app, host=self.config.health_host, port=self.config.health_port, log_level="warning")
        self._health_server = uvicorn.Server(config)
        task = asyncio.create_task(self._health_server.serve(), name="health-server")
        logger.info(f"✅ Endpoint de saúde em http://{self.config.health_host}:{self.config.health_port}/health")
        return task

    async def run(self) -> None:
        """
        Executa até request_stop() ou SIGINT/SIGTERM.

        Raises:
            ConfigurationError: ex.: sem privilégio ICMP (propagado pelo supervisor)
        """
        self.config.log_dir.mkdir(parents=True, exist_ok=True)
        self._install_signal_handlers()
        logger.info(
            f"✅ Runner iniciado em {self.config.vantage}: {len(self.config.series())} séries, "
            f"intervalo {self.config.probe_interval_s}s, scans a cada {self.config.scan_interval_s}s "
            f"({len(self.https_endpoints)} endpoints HTTPS, log *{SCAN_LOG_SUFFIX})"
        )

        health_task = await self._start_health_server()
        supervisor_task = asyncio.create_task(self.supervisor.run(), name="supervisor")
        stop_task = asyncio.create_task(self._stop.wait(), name="stop")
        watched = {supervisor_task, stop_task} | ({health_task} if health_task else set())
        try:
            done, _ = await asyncio.wait(watched, return_when=asyncio.FIRST_COMPLETED)
            if supervisor_task in done:
                supervisor_task.result()
            if health_task in done and not (self._stop.is_set() or self._health_server.should_exit):
                logger.error("❌ Servidor de saúde encerrou inesperadamente; parando o runner")
        finally:
            stop_task.cancel()
            await self.supervisor.stop(grace_s=self.config.timeout_ms / 1000.0)
            supervisor_task.cancel()
            await asyncio.gather(supervisor_task, return_exceptions=True)
            if self._health_server is not None:
                self._health_server.should_exit = True
            if health_task is not None:
                await asyncio.gather(health_task, return_exceptions=True)
            logger.info("Runner encerrado")


async def run(config: RunConfig) -> None:
    """Executa o daemon até um sinal de parada"""
    await ProbeDaemon(config).run()
