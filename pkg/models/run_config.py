"""
Modelos de configuração do runner e do snapshot de saúde
"""

from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from config.constants import (
    DEFAULT_HEALTH_HOST,
    DEFAULT_HEALTH_PORT,
    DEFAULT_HTTP_TIMEOUT_MS,
    DEFAULT_LOG_WRITE_RETRIES,
    DEFAULT_PING_PACKETS,
    DEFAULT_PROBE_INTERVAL_S,
    DEFAULT_SCAN_INTERVAL_S,
    DEFAULT_STAGGER,
)
from models.endpoint import EndpointSpec, Protocol
from models.probe_record import OutcomeClass


class RunConfig(BaseModel):
    """
    Configuração de um daemon (um por ponto de medição)
    """

    model_config = ConfigDict(frozen=True)

    vantage: str = Field(..., min_length=1, description="Rótulo do ponto de medição, ex: eu-west-1")
    endpoints: list[EndpointSpec] = Field(default_factory=list)
    probe_interval_s: int = Field(default=DEFAULT_PROBE_INTERVAL_S, ge=1)
    scan_interval_s: int = Field(default=DEFAULT_SCAN_INTERVAL_S, ge=1)
    stagger: bool = DEFAULT_STAGGER
    timeout_ms: int = Field(default=DEFAULT_HTTP_TIMEOUT_MS, gt=0)
    log_dir: Path = Path("logs")
    health_host: str = DEFAULT_HEALTH_HOST
    health_port: int = Field(default=DEFAULT_HEALTH_PORT, ge=0, le=65535)
    ping_packets: int = Field(default=DEFAULT_PING_PACKETS, ge=1)
    ping_backend: Literal["system", "udp"] = "system"
    trust_insecure_tls: bool = Field(default=False, description="Somente para testes contra o mocknet")
    log_write_retries: int = Field(default=DEFAULT_LOG_WRITE_RETRIES, ge=1)

    @model_validator(mode="after")
    def check_consistency(self) -> "RunConfig":
        if self.scan_interval_s < self.probe_interval_s:
            raise ValueError("scan_interval_s deve ser >= probe_interval_s")
        ids = [endpoint.id for endpoint in self.endpoints]
        duplicated = sorted({i for i in ids if ids.count(i) > 1})
        if duplicated:
            raise ValueError(f"ids de endpoint duplicados: {', '.join(duplicated)}")
        if "|" in self.vantage or "/" in self.vantage:
            raise ValueError("vantage não pode conter '|' ou '/'")
        return self

    def series(self) -> list[tuple[EndpointSpec, Protocol]]:
        """Todas as séries (endpoint, protocolo) em ordem estável"""
        order = [Protocol.ICMP, Protocol.HTTP, Protocol.HTTPS]
        return [
            (endpoint, protocol) for endpoint in self.endpoints for protocol in order if protocol in endpoint.protocols
        ]


class SeriesStatus(BaseModel):
    endpoint_id: str
    protocol: Protocol
    timestamp_ms: int
    outcome_class: OutcomeClass
    latency_ms: float
    age_s: float | None = None
    stale: bool = False


class HealthSnapshot(BaseModel):
    """Última medição por série, mais falhas do runner"""

    vantage: str
    generated_at_ms: int
    probe_interval_s: int
    series: list[SeriesStatus] = Field(default_factory=list)
    faults: list[str] = Field(default_factory=list)
    last_scan_errors: dict[str, str] = Field(default_factory=dict)
    uptime_s: float = 0.0
    rss_bytes: int | None = None
