"""
Modelos produzidos pela análise offline
"""

from enum import Enum
from typing import NamedTuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.endpoint import Protocol
from models.probe_record import ProbeRecord


class SeriesKey(NamedTuple):
    endpoint_id: str
    protocol: Protocol
    vantage: str

    def label(self) -> str:
        return f"{self.endpoint_id}/{self.protocol.value}@{self.vantage}"


class Series(BaseModel):
    """
    Registros de uma série em ordem estritamente crescente, com lacunas explícitas
    """

    model_config = ConfigDict(frozen=True)

    key: SeriesKey
    records: tuple[ProbeRecord, ...]
    gaps: tuple[tuple[int, int], ...] = ()
    expected_interval_s: int

    @model_validator(mode="after")
    def check_order(self) -> "Series":
        stamps = [record.timestamp_ms for record in self.records]
        if any(b <= a for a, b in zip(stamps, stamps[1:], strict=False)):
            raise ValueError(f"Registros fora de ordem em {self.key.label()}")
        return self

    @property
    def successable(self) -> list[ProbeRecord]:
        return [record for record in self.records if record.outcome.is_successable]


class LoadResult(BaseModel):
    series: dict[SeriesKey, Series] = Field(default_factory=dict)
    quarantined: int = 0
    duplicates: int = 0


class ReportStatus(str, Enum):
    OK = "OK"
    NO_DATA = "NO_DATA"


class AvailabilityReport(BaseModel):
    status: ReportStatus = ReportStatus.OK
    pingability: float | None = None
    accessibility: float | None = None
    successability: float | None = None
    denominator: dict[str, int] = Field(default_factory=dict)
    failure_distribution: dict[str, float] = Field(default_factory=dict)
    packets_sent: int = 0
    packets_lost: int = 0

    @classmethod
    def no_data(cls) -> "AvailabilityReport":
        return cls(status=ReportStatus.NO_DATA)


class Strategy(str, Enum):
    REGION_CHANGE = "REGION_CHANGE"
    HTTP_2_HTTPS = "HTTP_2_HTTPS"
    HTTPS_2_HTTP = "HTTPS_2_HTTP"


class StrategyOutcome(BaseModel):
    strategy: Strategy
    success_ratio: dict[str, float] = Field(default_factory=dict)
    failures: dict[str, int] = Field(default_factory=dict)
    unalignable: dict[str, int] = Field(default_factory=dict)
    excluded: list[str] = Field(default_factory=list, description="Endpoints sem falhas (razão indefinida)")
    min: float | None = None
    max: float | None = None
    avg: float | None = None


class LatencyStats(BaseModel):
    count: int
    mean: float
    stddev: float
    p50: float
    p90: float
    p99: float
    bin_width_ms: float
    histogram: list[tuple[float, int]] = Field(default_factory=list)


class KeyDelta(BaseModel):
    endpoint_id: str
    vantage: str
    protocol: Protocol
    p90_a: float
    p90_b: float
    p90_rel_change: float | None
    stddev_rel_change: float | None


class RunComparison(BaseModel):
    deltas: list[KeyDelta] = Field(default_factory=list)
    p90_increases: int = 0
    p90_decreases: int = 0
    p90_flat: int = 0
    p90_undefined: int = 0
    discontinued: list[str] = Field(default_factory=list)
    new: list[str] = Field(default_factory=list)
    score_changes: dict[str, float] = Field(default_factory=dict)
    median_abs_score_change: float | None = None


class ChangeEvent(BaseModel):
    model_config = ConfigDict(frozen=True)

    timestamp_ms: int
    old_score: float
    new_score: float
    relative_change: float | None = Field(default=None, description="Indefinida quando old_score = 0")
    flagged_zero_base: bool = False


class SuiteCensus(BaseModel):
    only_in_a: list[str] = Field(default_factory=list)
    only_in_b: list[str] = Field(default_factory=list)
    weak_occurrences_a: int = 0
    weak_occurrences_b: int = 0
    unclassified: list[str] = Field(default_factory=list)


class DailyAvailability(BaseModel):
    day: str = Field(..., description="Data UTC no formato YYYY-MM-DD")
    records: int
    pingability: float | None = None
    accessibility: float | None = None
    successability: float | None = None


class RangeSummary(BaseModel):
    """Mínimo, máximo e média de uma métrica entre endpoints"""

    count: int
    min: float
    max: float
    avg: float


class PingLossSummary(BaseModel):
    endpoint_id: str
    best: int = Field(..., description="Menor número absoluto de pacotes perdidos entre os vantages")
    worst: int
    avg: float
    worst_vantage: str
    packets_sent: int
    packets_lost: int


class GeofactorResult(BaseModel):
    value: float
    vantages: list[str]
    excluded: list[str] = Field(default_factory=list, description="Vantages sem dados (NO_DATA)")


class SizeChange(BaseModel):
    endpoint_id: str
    protocol: Protocol
    mean_bytes_a: float
    mean_bytes_b: float
    rel_change: float | None


class LagEntry(BaseModel):
    endpoint_id: str
    vantage_first: str
    vantage_second: str
    first_change_ms: int
    lag_s: float
