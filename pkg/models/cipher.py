"""
Modelos de cipher suites e resultados de scan TLS
"""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class KeyExchange(str, Enum):
    ECDHE = "ECDHE"
    DHE = "DHE"
    STATIC_RSA = "STATIC_RSA"
    OTHER = "OTHER"


class CipherSuiteInfo(BaseModel):
    """
    Suite classificada: score = baseScore + keyLengthModifier
    """

    model_config = ConfigDict(frozen=True)

    name: str
    key_exchange: KeyExchange
    cipher_family: str
    cipher_bits: int = Field(..., ge=0)
    mac: str
    base_score: int = Field(..., ge=-1, le=1)
    key_length_modifier: float

    @field_validator("key_length_modifier")
    @classmethod
    def validate_modifier(cls, v: float) -> float:
        if v not in (0.0, 0.1):
            raise ValueError("keyLengthModifier deve ser 0 ou 0.1")
        return v

    @property
    def score(self) -> float:
        return round(self.base_score + self.key_length_modifier, 10)


class CipherScanRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    timestamp_ms: int = Field(..., ge=0)
    vantage: str = Field(..., min_length=1)
    endpoint_id: str = Field(..., min_length=1)
    suites: list[CipherSuiteInfo] = Field(
        ..., min_length=1, description="Ordem de preferência do servidor (rank 1 primeiro)"
    )
    server_score: float
    detail: str = ""

    @model_validator(mode="after")
    def check_suites(self) -> "CipherScanRecord":
        names = [suite.name for suite in self.suites]
        if len(names) != len(set(names)):
            raise ValueError("Lista de suites contém duplicatas")
        expected = sum(suite.score / rank for rank, suite in enumerate(self.suites, start=1))
        if abs(expected - self.server_score) > 1e-6:
            raise ValueError(f"server_score {self.server_score} difere de {expected}")
        return self

    @property
    def suite_names(self) -> list[str]:
        return [suite.name for suite in self.suites]


class ScanLogEntry(BaseModel):
    """Linha do log de scans como lida pela análise (somente nomes das suites)"""

    model_config = ConfigDict(frozen=True)

    timestamp_ms: int
    vantage: str
    endpoint_id: str
    server_score: float
    suite_names: tuple[str, ...]


class ScanFailure(BaseModel):
    """Scan que não produziu lista de suites (distinto de lista vazia)"""

    model_config = ConfigDict(frozen=True)

    timestamp_ms: int
    vantage: str
    endpoint_id: str
    detail: str
