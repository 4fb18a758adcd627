import logging

from fastapi.testclient import TestClient

from api.server import create_app, render_health_html
from conftest import BASE_MS, make_record
from models.endpoint import Protocol
from models.probe_record import FailureKind
from monitoring import MetricsCollector
from runner import HealthState, staleness

logger = logging.getLogger("apiq")


def _state() -> tuple[HealthState, MetricsCollector]:
    metrics = MetricsCollector("eu")
    return HealthState("eu", 300, metrics), metrics


def test_empty_snapshot_is_served():
    """Início sem medições: snapshot vazio e status 200"""
    state, metrics = _state()
    client = TestClient(create_app(state, metrics))

    response = client.get("/health.json")
    assert response.status_code == 200
    body = response.json()
    assert body["vantage"] == "eu"
    assert body["series"] == []

    page = client.get("/health")
    assert page.status_code == 200
    assert "Nenhuma medição ainda" in page.text


def test_snapshot_keeps_latest_per_series():
    """Uma linha por série, sempre com a medição mais recente"""
    state, metrics = _state()
    for record in (
        make_record(BASE_MS, protocol=Protocol.HTTP),
        make_record(BASE_MS + 300_000, protocol=Protocol.HTTP, status=503),
        make_record(BASE_MS + 10_000, protocol=Protocol.HTTPS, failure=FailureKind.TIMEOUT, latency_ms=60000.0),
    ):
        state.commit(record)
        metrics.record_probe(record)

    snapshot = state.snapshot(now_ms=BASE_MS + 310_000)
    assert [(s.endpoint_id, s.protocol) for s in snapshot.series] == [("api1", Protocol.HTTP), ("api1", Protocol.HTTPS)]
    http, https = snapshot.series
    assert http.timestamp_ms == BASE_MS + 300_000
    assert http.outcome_class.value == "SERVER_ERROR"
    assert https.latency_ms == 60000.0
    assert not http.stale and not https.stale

    client = TestClient(create_app(state, metrics))
    page = client.get("/health").text
    assert "SERVER_ERROR" in page and "NO_RESPONSE" in page
    metrics_text = client.get("/metrics").text
    assert 'apiq_probes_total{endpoint="api1",protocol="HTTP",outcome="SERVER_ERROR"} 1.0' in metrics_text
    assert "apiq_uptime_seconds" in metrics_text


def test_staleness_after_two_intervals():
    """Runner travado: timestamps mais velhos que 2x o intervalo ficam evidentes"""
    state, _ = _state()
    state.commit(make_record(BASE_MS))
    fresh = state.snapshot(now_ms=BASE_MS + 600_000)
    assert staleness(fresh, BASE_MS + 600_000, 300) == []
    assert not fresh.series[0].stale

    wedged = state.snapshot(now_ms=BASE_MS + 600_001)
    assert wedged.series[0].stale
    assert len(staleness(wedged, BASE_MS + 600_001, 300)) == 1
    assert "(parada)" in render_health_html(wedged)


def test_faults_and_scan_errors_are_reported():
    state, _ = _state()
    state.add_fault("Falha ao gravar em 2018-01-01_eu.log")
    state.scan_failed("api1", "NO_SUITES: nenhuma suite negociada")
    snapshot = state.snapshot()
    assert snapshot.faults == ["Falha ao gravar em 2018-01-01_eu.log"]
    assert snapshot.last_scan_errors == {"api1": "NO_SUITES: nenhuma suite negociada"}
    state.scan_succeeded("api1")
    assert state.snapshot().last_scan_errors == {}
    logger.info("✅ Falhas do runner aparecem no endpoint de saúde")
