"""
Modelos de resultado de medição (outcome e registro)
"""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.endpoint import Protocol


class OutcomeClass(str, Enum):
    SUCCESS = "SUCCESS"
    CLIENT_ERROR = "CLIENT_ERROR"
    SERVER_ERROR = "SERVER_ERROR"
    NO_RESPONSE = "NO_RESPONSE"
    DNS_FAILURE = "DNS_FAILURE"
    CONNECT_FAILURE = "CONNECT_FAILURE"
    TLS_FAILURE = "TLS_FAILURE"


class FailureKind(str, Enum):
    """Falhas sem código de status observadas pelo cliente"""

    TIMEOUT = "timeout"
    DISCONNECT = "disconnect"
    NO_ECHO = "no_echo"
    DNS = "dns"
    CONNECT = "connect"
    TLS = "tls"


STATUSLESS_CLASSES = frozenset(
    {OutcomeClass.NO_RESPONSE, OutcomeClass.DNS_FAILURE, OutcomeClass.CONNECT_FAILURE, OutcomeClass.TLS_FAILURE}
)


class ProbeOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    outcome_class: OutcomeClass
    status_code: int | None = Field(default=None, ge=100, le=599)
    detail: str = ""

    @model_validator(mode="after")
    def check_partition(self) -> "ProbeOutcome":
        code = self.status_code
        cls_ = self.outcome_class
        if cls_ in STATUSLESS_CLASSES:
            if code is not None:
                raise ValueError(f"{cls_.value} não pode ter status_code")
            return self
        if code is None:
            # SUCCESS sem código só existe para eco ICMP; ProbeRecord garante o protocolo
            if cls_ == OutcomeClass.SUCCESS:
                return self
            raise ValueError(f"{cls_.value} exige status_code")
        expected = {
            OutcomeClass.SUCCESS: 200 <= code <= 399,
            OutcomeClass.CLIENT_ERROR: 400 <= code <= 499,
            OutcomeClass.SERVER_ERROR: 500 <= code <= 599,
        }[cls_]
        if not expected:
            raise ValueError(f"status_code {code} incompatível com {cls_.value}")
        return self

    @property
    def is_successable(self) -> bool:
        return self.outcome_class == OutcomeClass.SUCCESS

    @property
    def is_accessible(self) -> bool:
        return self.status_code is not None


class ProbeRecord(BaseModel):
    """
    Uma medição individual; ordenada por (endpoint_id, protocol, vantage, timestamp_ms)
    """

    model_config = ConfigDict(frozen=True)

    timestamp_ms: int = Field(..., ge=0, description="UTC em milissegundos desde a época")
    vantage: str = Field(..., min_length=1)
    endpoint_id: str = Field(..., min_length=1)
    protocol: Protocol
    latency_ms: float = Field(..., ge=0.0)
    outcome: ProbeOutcome
    body_bytes: int = Field(default=0, ge=0)
    packets_sent: int | None = Field(default=None, ge=1)
    packets_lost: int | None = Field(default=None, ge=0)

    @model_validator(mode="after")
    def check_icmp_fields(self) -> "ProbeRecord":
        if self.protocol == Protocol.ICMP:
            if self.packets_sent is None or self.packets_lost is None:
                raise ValueError("Registros ICMP exigem packets_sent e packets_lost")
            if self.packets_lost > self.packets_sent:
                raise ValueError("packets_lost não pode exceder packets_sent")
            if self.body_bytes != 0:
                raise ValueError("Registros ICMP têm body_bytes = 0")
            if self.outcome.status_code is not None:
                raise ValueError("Registros ICMP não têm status_code")
            return self
        if self.packets_sent is not None or self.packets_lost is not None:
            raise ValueError("packets_sent/packets_lost são exclusivos de ICMP")
        if self.outcome.outcome_class == OutcomeClass.SUCCESS and self.outcome.status_code is None:
            raise ValueError("SUCCESS em HTTP(S) exige status_code 2xx/3xx")
        return self

    @property
    def sort_key(self) -> tuple[str, str, str, int]:
        return (self.endpoint_id, self.protocol.value, self.vantage, self.timestamp_ms)

    @property
    def series_label(self) -> str:
        return f"{self.endpoint_id}/{self.protocol.value}"
