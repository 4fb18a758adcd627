import logging

import pytest
from pydantic import ValidationError

from conftest import BASE_MS, make_record
from models import (
    EndpointSpec,
    FaultPlan,
    FaultWindow,
    OutcomeClass,
    ProbeOutcome,
    ProbeRecord,
    Protocol,
    RunConfig,
    Series,
    SeriesKey,
)
from models.fault_plan import OkBehavior, StatusBehavior, TimeoutBehavior

logger = logging.getLogger("apiq")


def test_endpoint_urls():
    """URL sem esquema; portas padrão ficam implícitas"""
    endpoint = EndpointSpec(id="maps", url="maps.example.org/geocode?q=Berlin", protocols={"HTTP", "HTTPS"})
    assert endpoint.host == "maps.example.org"
    assert endpoint.path == "/geocode?q=Berlin"
    assert endpoint.url_for(Protocol.HTTP) == "http://maps.example.org/geocode?q=Berlin"
    assert endpoint.url_for(Protocol.HTTPS) == "https://maps.example.org/geocode?q=Berlin"

    local = EndpointSpec(id="mock", url="127.0.0.1", protocols={"HTTP"}, http_port=8080)
    assert local.url_for(Protocol.HTTP) == "http://127.0.0.1:8080/"


@pytest.mark.parametrize(
    "kwargs",
    [
        {"id": "a|b", "url": "h", "protocols": {"HTTP"}},
        {"id": "a", "url": "https://h", "protocols": {"HTTP"}},
        {"id": "a", "url": "h", "protocols": set()},
        {"id": "a", "url": "h", "protocols": {"HTTP"}, "expected_method": "POST"},
    ],
)
def test_endpoint_rejects_invalid(kwargs):
    with pytest.raises(ValidationError):
        EndpointSpec(**kwargs)


def test_outcome_partition():
    """Classe e status_code precisam concordar"""
    with pytest.raises(ValidationError):
        ProbeOutcome(outcome_class=OutcomeClass.SUCCESS, status_code=500)
    with pytest.raises(ValidationError):
        ProbeOutcome(outcome_class=OutcomeClass.SERVER_ERROR)
    with pytest.raises(ValidationError):
        ProbeOutcome(outcome_class=OutcomeClass.NO_RESPONSE, status_code=200)
    assert ProbeOutcome(outcome_class=OutcomeClass.SUCCESS).status_code is None


def test_icmp_record_rules():
    """ICMP exige contagem de pacotes, sem corpo e sem código"""
    record = make_record(BASE_MS, protocol=Protocol.ICMP, packets_sent=5, packets_lost=2)
    assert record.outcome.is_successable
    assert record.body_bytes == 0

    with pytest.raises(ValidationError):
        ProbeRecord(
            timestamp_ms=BASE_MS,
            vantage="eu",
            endpoint_id="api1",
            protocol=Protocol.ICMP,
            latency_ms=1.0,
            outcome=ProbeOutcome(outcome_class=OutcomeClass.SUCCESS),
        )
    with pytest.raises(ValidationError):
        make_record(BASE_MS, protocol=Protocol.ICMP, packets_sent=5, packets_lost=6)


def test_http_record_rules():
    """HTTP não tem campos de pacotes e SUCCESS exige código"""
    with pytest.raises(ValidationError):
        ProbeRecord(
            timestamp_ms=BASE_MS,
            vantage="eu",
            endpoint_id="api1",
            protocol=Protocol.HTTP,
            latency_ms=1.0,
            outcome=ProbeOutcome(outcome_class=OutcomeClass.SUCCESS),
        )
    with pytest.raises(ValidationError):
        ProbeRecord(
            timestamp_ms=BASE_MS,
            vantage="eu",
            endpoint_id="api1",
            protocol=Protocol.HTTP,
            latency_ms=1.0,
            outcome=ProbeOutcome(outcome_class=OutcomeClass.SUCCESS, status_code=200),
            packets_sent=5,
            packets_lost=0,
        )


def test_series_must_be_strictly_ordered():
    key = SeriesKey("api1", Protocol.HTTPS, "eu")
    first = make_record(BASE_MS)
    with pytest.raises(ValidationError):
        Series(key=key, records=(first, first), expected_interval_s=300)
    with pytest.raises(ValidationError):
        Series(key=key, records=(make_record(BASE_MS + 1), first), expected_interval_s=300)


def test_run_config_invariants():
    """scan_interval_s >= probe_interval_s e ids únicos"""
    endpoint = EndpointSpec(id="a", url="h", protocols={"HTTP"})
    config = RunConfig(vantage="eu", endpoints=[endpoint])
    assert config.probe_interval_s == 300
    assert config.scan_interval_s == 43200
    assert config.stagger is True

    with pytest.raises(ValidationError):
        RunConfig(vantage="eu", probe_interval_s=600, scan_interval_s=300)
    with pytest.raises(ValidationError):
        RunConfig(vantage="eu", probe_interval_s=0)
    with pytest.raises(ValidationError):
        RunConfig(vantage="eu", endpoints=[endpoint, endpoint])


def test_run_config_series_order():
    endpoint = EndpointSpec(id="a", url="h", protocols={"HTTPS", "ICMP", "HTTP"})
    config = RunConfig(vantage="eu", endpoints=[endpoint])
    assert [protocol for _, protocol in config.series()] == [Protocol.ICMP, Protocol.HTTP, Protocol.HTTPS]


def test_fault_plan_windows():
    """Janelas ordenadas e sem sobreposição; fora delas vale OK padrão"""
    plan = FaultPlan(
        windows=(
            FaultWindow(start_offset_s=0, duration_s=10, behavior=StatusBehavior(code=503)),
            FaultWindow(start_offset_s=20, duration_s=5, behavior=TimeoutBehavior()),
        )
    )
    assert plan.window_at(0) == (0, StatusBehavior(code=503))
    assert plan.window_at(9.999)[0] == 0
    assert plan.window_at(10) == (None, OkBehavior())
    assert plan.window_at(22)[0] == 1
    assert plan.window_at(100) == (None, OkBehavior())
    assert plan.span_s == 25
    assert not plan.has_packet_loss

    with pytest.raises(ValidationError):
        FaultPlan(
            windows=(
                FaultWindow(start_offset_s=0, duration_s=10, behavior=TimeoutBehavior()),
                FaultWindow(start_offset_s=5, duration_s=10, behavior=TimeoutBehavior()),
            )
        )
    with pytest.raises(ValidationError):
        FaultPlan(tls_preference=("RC4-SHA", "RC4-SHA"))
    logger.info("✅ Invariantes dos modelos verificadas")
