import logging
import random

import pytest

from analysis import (
    availability,
    daily_availability,
    find_gaps,
    overall_accessibility,
    ping_loss_distribution,
    slow_requests,
)
from conftest import BASE_MS, make_record, make_series
from models.endpoint import Protocol
from models.probe_record import FailureKind
from models.report import ReportStatus, Series, SeriesKey

logger = logging.getLogger("apiq")

INTERVAL_MS = 300_000
DAY_MS = 86_400_000


def _http_series(outcomes, **kwargs) -> Series:
    records = []
    for i, outcome in enumerate(outcomes):
        if isinstance(outcome, FailureKind):
            records.append(make_record(BASE_MS + i * INTERVAL_MS, failure=outcome, **kwargs))
        else:
            records.append(make_record(BASE_MS + i * INTERVAL_MS, status=outcome, **kwargs))
    return make_series(records)


def test_mixed_series():
    """95 x 200, 3 x 503, 2 timeouts"""
    outcomes = [200] * 95 + [503] * 3 + [FailureKind.TIMEOUT] * 2
    random.Random(3).shuffle(outcomes)
    report = availability(_http_series(outcomes))
    assert report.accessibility == pytest.approx(0.98)
    assert report.successability == pytest.approx(0.95)
    assert report.failure_distribution == {"4xx": 0.0, "5xx": pytest.approx(0.6), "None": pytest.approx(0.4)}
    assert report.denominator == {"records": 100, "accessible": 98, "successable": 95, "failures": 5}
    assert report.pingability is None


def test_all_success():
    report = availability(_http_series([200] * 20))
    assert report.accessibility == report.successability == 1.0
    assert report.failure_distribution == {}


def test_failure_split_mostly_5xx():
    """Falhas 87/13 entre 5xx e sem resposta: distribuição 0% / 87% / 13%"""
    outcomes = [200] * 900 + [500] * 87 + [FailureKind.DISCONNECT] * 13
    report = availability(_http_series(outcomes))
    assert report.failure_distribution["4xx"] == 0.0
    assert report.failure_distribution["5xx"] == pytest.approx(0.87)
    assert report.failure_distribution["None"] == pytest.approx(0.13)


def test_pingability_counts_packets():
    """Pingability é a fração de ecos respondidos"""
    records = [
        make_record(BASE_MS + i * INTERVAL_MS, protocol=Protocol.ICMP, packets_sent=5, packets_lost=lost)
        for i, lost in enumerate([0, 1, 5, 0])
    ]
    report = availability(make_series(records))
    assert report.pingability == pytest.approx(14 / 20)
    assert (report.packets_sent, report.packets_lost) == (20, 6)
    assert report.accessibility is None


def test_empty_series_is_no_data():
    series = Series(key=SeriesKey("api1", Protocol.HTTP, "eu"), records=(), expected_interval_s=300)
    report = availability(series)
    assert report.status == ReportStatus.NO_DATA
    assert report.accessibility is None


def test_successability_never_exceeds_accessibility():
    """Em traços aleatórios: successability <= accessibility <= 1"""
    choices = [200, 204, 302, 404, 429, 500, 503, FailureKind.TIMEOUT, FailureKind.DNS, FailureKind.TLS]
    for seed in range(25):
        rng = random.Random(seed)
        report = availability(_http_series([rng.choice(choices) for _ in range(rng.randint(1, 200))]))
        assert 0.0 <= report.successability <= report.accessibility <= 1.0
        if report.failure_distribution:
            assert sum(report.failure_distribution.values()) == pytest.approx(1.0)


def test_inserting_a_gap_keeps_fractions():
    """Deslocar metade da série para depois de uma lacuna não muda as frações"""
    rng = random.Random(11)
    outcomes = [rng.choice([200, 200, 200, 503, FailureKind.TIMEOUT]) for _ in range(60)]
    original = _http_series(outcomes)

    shifted_records = [
        r if i < 30 else r.model_copy(update={"timestamp_ms": r.timestamp_ms + 2 * DAY_MS})
        for i, r in enumerate(original.records)
    ]
    stamps = [r.timestamp_ms for r in shifted_records]
    with_gap = make_series(shifted_records, gaps=find_gaps(stamps, 300, 2.0))
    assert len(with_gap.gaps) == 1

    a, b = availability(original), availability(with_gap)
    assert (a.accessibility, a.successability, a.failure_distribution) == (
        b.accessibility,
        b.successability,
        b.failure_distribution,
    )


def test_daily_availability_skips_empty_days():
    records = [make_record(BASE_MS + i * INTERVAL_MS) for i in range(4)]
    records += [make_record(BASE_MS + 2 * DAY_MS + i * INTERVAL_MS, status=503) for i in range(2)]
    days = daily_availability(make_series(records))
    assert [d.day for d in days] == ["2018-01-01", "2018-01-03"]
    assert days[0].successability == 1.0
    assert days[1].successability == 0.0 and days[1].accessibility == 1.0


def test_overall_accessibility_range():
    """Mínimo/máximo/média entre endpoints, por protocolo"""
    reports = {
        SeriesKey("a", Protocol.HTTP, "eu"): availability(_http_series([200] * 9 + [FailureKind.TIMEOUT])),
        SeriesKey("b", Protocol.HTTP, "eu"): availability(_http_series([200] * 10)),
        SeriesKey("c", Protocol.HTTP, "eu"): availability(_http_series([FailureKind.TIMEOUT] * 10)),
    }
    summary = overall_accessibility(reports)
    assert summary[Protocol.HTTP].count == 3
    assert summary[Protocol.HTTP].min == 0.0
    assert summary[Protocol.HTTP].max == 1.0
    assert summary[Protocol.HTTP].avg == pytest.approx(1.9 / 3)

    without_offline = overall_accessibility(reports, exclude_endpoints=["c"])
    assert without_offline[Protocol.HTTP].min == pytest.approx(0.9)


def test_ping_loss_distribution():
    """Pacotes perdidos por endpoint: melhor, pior e média entre vantages"""
    series = []
    for vantage, lost in (("eu", 0), ("us", 3), ("ap", 5)):
        records = [
            make_record(
                BASE_MS + i * INTERVAL_MS, protocol=Protocol.ICMP, vantage=vantage, packets_sent=5, packets_lost=lost
            )
            for i in range(2)
        ]
        series.append(make_series(records))
    summary = ping_loss_distribution(series)["api1"]
    assert (summary.best, summary.worst, summary.worst_vantage) == (0, 10, "ap")
    assert summary.avg == pytest.approx(16 / 3)
    assert (summary.packets_sent, summary.packets_lost) == (30, 16)


def test_slow_requests():
    latencies = [10, 60001, 70000]
    records = [make_record(BASE_MS + i * INTERVAL_MS, latency_ms=latency) for i, latency in enumerate(latencies)]
    assert slow_requests(make_series(records)) == 2
    logger.info("✅ Métricas de disponibilidade conferem")
