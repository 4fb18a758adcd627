"""
Disponibilidade: pingability, accessibility, successability e distribuição de falhas
"""

import logging
from collections import defaultdict
from collections.abc import Iterable
from datetime import UTC, datetime

import numpy as np

from analysis.loader import select_series
from config.constants import SLOW_REQUEST_THRESHOLD_MS
from models.endpoint import Protocol
from models.probe_record import OutcomeClass, ProbeRecord
from models.report import (
    AvailabilityReport,
    DailyAvailability,
    PingLossSummary,
    RangeSummary,
    ReportStatus,
    Series,
    SeriesKey,
)

logger = logging.getLogger("apiq")

FAILURE_BUCKETS = ("4xx", "5xx", "None")


def failure_bucket(record: ProbeRecord) -> str:
    if record.outcome.outcome_class == OutcomeClass.CLIENT_ERROR:
        return "4xx"
    if record.outcome.outcome_class == OutcomeClass.SERVER_ERROR:
        return "5xx"
    return "None"


def _icmp_report(records: Iterable[ProbeRecord]) -> AvailabilityReport:
    records = list(records)
    sent = sum(r.packets_sent or 0 for r in records)
    lost = sum(r.packets_lost or 0 for r in records)
    if sent == 0:
        return AvailabilityReport.no_data()
    return AvailabilityReport(
        pingability=(sent - lost) / sent,
        denominator={"records": len(records), "packets": sent},
        packets_sent=sent,
        packets_lost=lost,
    )


def _http_report(records: Iterable[ProbeRecord]) -> AvailabilityReport:
    records = list(records)
    total = len(records)
    accessible = sum(1 for r in records if r.outcome.is_accessible)
    successable = sum(1 for r in records if r.outcome.is_successable)
    failures = [r for r in records if not r.outcome.is_successable]

    distribution: dict[str, float] = {}
    if failures:
        counts = {bucket: 0 for bucket in FAILURE_BUCKETS}
        for record in failures:
            counts[failure_bucket(record)] += 1
        distribution = {bucket: counts[bucket] / len(failures) for bucket in FAILURE_BUCKETS}

    return AvailabilityReport(
        accessibility=accessible / total,
        successability=successable / total,
        denominator={"records": total, "accessible": accessible, "successable": successable, "failures": len(failures)},
        failure_distribution=distribution,
    )


def availability_of_records(protocol: Protocol, records: Iterable[ProbeRecord]) -> AvailabilityReport:
    records = list(records)
    if not records:
        return AvailabilityReport.no_data()
    if protocol == Protocol.ICMP:
        return _icmp_report(records)
    return _http_report(records)


def availability(series: Series) -> AvailabilityReport:
    """
    Frações sobre os registros existentes; lacunas não entram em nenhum denominador.
    Série vazia -> relatório NO_DATA explícito.
    """
    return availability_of_records(series.key.protocol, series.records)


def _day(timestamp_ms: int) -> str:
    return datetime.fromtimestamp(timestamp_ms / 1000, tz=UTC).strftime("%Y-%m-%d")


def daily_availability(series: Series) -> list[DailyAvailability]:
    """Disponibilidade por dia UTC; dias sem registros não aparecem"""
    by_day: dict[str, list[ProbeRecord]] = defaultdict(list)
    for record in series.records:
        by_day[_day(record.timestamp_ms)].append(record)

    days = []
    for day in sorted(by_day):
        report = availability_of_records(series.key.protocol, by_day[day])
        days.append(
            DailyAvailability(
                day=day,
                records=len(by_day[day]),
                pingability=report.pingability,
                accessibility=report.accessibility,
                successability=report.successability,
            )
        )
    return days


def overall_accessibility(
    reports: dict[SeriesKey, AvailabilityReport], exclude_endpoints: Iterable[str] = ()
) -> dict[Protocol, RangeSummary]:
    """Mínimo/máximo/média de accessibility por protocolo, um valor por endpoint"""
    excluded = set(exclude_endpoints)
    per_endpoint: dict[Protocol, dict[str, list[tuple[int, int]]]] = defaultdict(lambda: defaultdict(list))
    for key, report in reports.items():
        if key.endpoint_id in excluded or key.protocol == Protocol.ICMP or report.status == ReportStatus.NO_DATA:
            continue
        per_endpoint[key.protocol][key.endpoint_id].append(
            (report.denominator.get("accessible", 0), report.denominator.get("records", 0))
        )

    summary: dict[Protocol, RangeSummary] = {}
    for protocol, endpoints in per_endpoint.items():
        values = [sum(a for a, _ in parts) / sum(t for _, t in parts) for parts in endpoints.values()]
        summary[protocol] = RangeSummary(
            count=len(values), min=min(values), max=max(values), avg=float(np.mean(values))
        )
    return summary


def ping_loss_distribution(
    series: dict[SeriesKey, Series] | Iterable[Series], exclude_endpoints: Iterable[str] = ()
) -> dict[str, PingLossSummary]:
    """Pacotes perdidos (absolutos) por endpoint: melhor, pior e média entre vantages"""
    losses: dict[str, dict[str, tuple[int, int]]] = defaultdict(dict)
    for s in select_series(series, exclude_endpoints):
        if s.key.protocol != Protocol.ICMP:
            continue
        sent = sum(r.packets_sent or 0 for r in s.records)
        lost = sum(r.packets_lost or 0 for r in s.records)
        previous = losses[s.key.endpoint_id].get(s.key.vantage, (0, 0))
        losses[s.key.endpoint_id][s.key.vantage] = (previous[0] + sent, previous[1] + lost)

    result: dict[str, PingLossSummary] = {}
    for endpoint_id in sorted(losses):
        by_vantage = losses[endpoint_id]
        lost_values = {vantage: lost for vantage, (_, lost) in by_vantage.items()}
        worst_vantage = max(sorted(lost_values), key=lambda v: lost_values[v])
        result[endpoint_id] = PingLossSummary(
            endpoint_id=endpoint_id,
            best=min(lost_values.values()),
            worst=lost_values[worst_vantage],
            avg=float(np.mean(list(lost_values.values()))),
            worst_vantage=worst_vantage,
            packets_sent=sum(sent for sent, _ in by_vantage.values()),
            packets_lost=sum(lost_values.values()),
        )
    return result


def slow_requests(series: Series, threshold_ms: float = SLOW_REQUEST_THRESHOLD_MS) -> int:
    """Respostas bem-sucedidas mais lentas que o limite"""
    return sum(1 for r in series.successable if r.latency_ms > threshold_ms)
