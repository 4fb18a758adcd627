"""
Módulo Runner - daemon de medição, log append-only e endpoint de saúde
"""

from .daemon import ProbeDaemon, run
from .health import HealthState, staleness
from .record_log import RecordLogWriter, decode_record, decode_scan, encode_record, encode_scan
from .scheduler import PeriodicWorker, Supervisor, assign_phases, next_fire_ms

__all__ = [
    "HealthState",
    "PeriodicWorker",
    "ProbeDaemon",
    "RecordLogWriter",
    "Supervisor",
    "assign_phases",
    "decode_record",
    "decode_scan",
    "encode_record",
    "encode_scan",
    "next_fire_ms",
    "run",
    "staleness",
]
