import logging
import sys
from collections.abc import Iterable
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from models.endpoint import EndpointSpec, Protocol
from models.probe_record import FailureKind, OutcomeClass, ProbeOutcome, ProbeRecord
from models.report import Series, SeriesKey
from probe.classifier import classify_outcome
from runner.record_log import encode_record

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)

# 2018-01-01T00:00:00Z
BASE_MS = 1_514_764_800_000


def make_record(
    timestamp_ms: int,
    *,
    endpoint_id: str = "api1",
    protocol: Protocol = Protocol.HTTPS,
    vantage: str = "eu",
    status: int | None = 200,
    failure: FailureKind | None = None,
    latency_ms: float = 100.0,
    body_bytes: int = 0,
    packets_sent: int | None = None,
    packets_lost: int | None = None,
) -> ProbeRecord:
    """Registro sintético; ICMP usa SUCCESS quando algum pacote volta"""
    if protocol == Protocol.ICMP:
        sent = packets_sent or 5
        lost = packets_lost or 0
        outcome = (
            classify_outcome(failure_kind=FailureKind.NO_ECHO)
            if lost >= sent
            else ProbeOutcome(outcome_class=OutcomeClass.SUCCESS)
        )
        return ProbeRecord(
            timestamp_ms=timestamp_ms,
            vantage=vantage,
            endpoint_id=endpoint_id,
            protocol=protocol,
            latency_ms=latency_ms,
            outcome=outcome,
            packets_sent=sent,
            packets_lost=lost,
        )
    outcome = classify_outcome(failure_kind=failure) if failure else classify_outcome(status_code=status)
    return ProbeRecord(
        timestamp_ms=timestamp_ms,
        vantage=vantage,
        endpoint_id=endpoint_id,
        protocol=protocol,
        latency_ms=latency_ms,
        outcome=outcome,
        body_bytes=body_bytes,
    )


def make_series(records: Iterable[ProbeRecord], interval_s: int = 300, gaps=()) -> Series:
    records = sorted(records, key=lambda r: r.timestamp_ms)
    first = records[0]
    return Series(
        key=SeriesKey(first.endpoint_id, first.protocol, first.vantage),
        records=tuple(records),
        gaps=tuple(gaps),
        expected_interval_s=interval_s,
    )


def write_log(path: Path, records: Iterable[ProbeRecord], extra_lines: Iterable[str] = ()) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [encode_record(record) for record in records] + list(extra_lines)
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return path


@pytest.fixture
def log_dir(tmp_path: Path) -> Path:
    directory = tmp_path / "logs"
    directory.mkdir()
    return directory


@pytest.fixture
def local_endpoint() -> EndpointSpec:
    return EndpointSpec(
        id="mock",
        url="127.0.0.1/items",
        protocols=frozenset({Protocol.HTTP, Protocol.HTTPS}),
        http_port=18080,
        https_port=18443,
    )


@pytest.fixture
def config_file(tmp_path: Path, log_dir: Path) -> Path:
    path = tmp_path / "apiq.yaml"
    path.write_text(
        "\n".join(
            [
                "vantage: test",
                "probe_interval_s: 60",
                "scan_interval_s: 3600",
                "timeout_ms: 2000",
                f"log_dir: {log_dir}",
                "health_port: 0",
                "endpoints:",
                "  - id: api1",
                "    url: 127.0.0.1/items",
                "    protocols: [HTTP, HTTPS]",
                "",
            ]
        ),
        encoding="utf-8",
    )
    return path


@pytest.fixture
def populated_logs(log_dir: Path) -> Path:
    """Dois dias, dois vantages, ICMP/HTTP/HTTPS e um log de scans com uma queda de score"""
    interval_ms = 300_000
    for vantage, slow in (("eu", 0.0), ("us", 80.0)):
        for day in range(2):
            records = []
            for i in range(60):
                stamp = BASE_MS + day * 86_400_000 + i * interval_ms + (7_000 if vantage == "us" else 0)
                failing = i % 20 == 3
                records.append(make_record(stamp, protocol=Protocol.ICMP, vantage=vantage, packets_lost=i % 2))
                records.append(
                    make_record(
                        stamp + 1000,
                        protocol=Protocol.HTTP,
                        vantage=vantage,
                        status=503 if failing else 200,
                        latency_ms=50.0 + slow + i,
                        body_bytes=512,
                    )
                )
                records.append(
                    make_record(
                        stamp + 2000,
                        vantage=vantage,
                        failure=FailureKind.TIMEOUT if failing and vantage == "eu" else None,
                        latency_ms=90.0 + slow + i,
                        body_bytes=512,
                    )
                )
            write_log(log_dir / f"2018-01-0{day + 1}_{vantage}.log", records)

        scores = [1.85] * 6 + [1.77] * 14
        lines = [
            f"{BASE_MS + i * 3_600_000}|{vantage}|api1|{score:.6f}|ECDHE-RSA-AES256-SHA384;AES128-SHA"
            for i, score in enumerate(scores)
        ]
        (log_dir / f"2018-01-01_{vantage}.scan.log").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return log_dir
