"""
Modelos Pydantic do apiq
"""

from .cipher import CipherScanRecord, CipherSuiteInfo, KeyExchange, ScanFailure, ScanLogEntry
from .endpoint import EndpointSpec, Protocol
from .fault_plan import FaultPlan, FaultWindow
from .probe_record import FailureKind, OutcomeClass, ProbeOutcome, ProbeRecord
from .report import (
    AvailabilityReport,
    ChangeEvent,
    DailyAvailability,
    GeofactorResult,
    KeyDelta,
    LagEntry,
    LatencyStats,
    LoadResult,
    PingLossSummary,
    RangeSummary,
    ReportStatus,
    RunComparison,
    Series,
    SeriesKey,
    SizeChange,
    Strategy,
    StrategyOutcome,
    SuiteCensus,
)
from .run_config import HealthSnapshot, RunConfig

__all__ = [
    "AvailabilityReport",
    "ChangeEvent",
    "CipherScanRecord",
    "CipherSuiteInfo",
    "DailyAvailability",
    "EndpointSpec",
    "FailureKind",
    "FaultPlan",
    "FaultWindow",
    "GeofactorResult",
    "HealthSnapshot",
    "KeyDelta",
    "KeyExchange",
    "LagEntry",
    "LatencyStats",
    "LoadResult",
    "OutcomeClass",
    "PingLossSummary",
    "ProbeOutcome",
    "ProbeRecord",
    "Protocol",
    "RangeSummary",
    "ReportStatus",
    "RunComparison",
    "RunConfig",
    "ScanFailure",
    "ScanLogEntry",
    "Series",
    "SeriesKey",
    "SizeChange",
    "Strategy",
    "StrategyOutcome",
    "SuiteCensus",
]
