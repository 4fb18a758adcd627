import logging
import random

import pytest

from analysis import failover_ratios
from conftest import BASE_MS, make_record, make_series
from models.endpoint import Protocol
from models.errors import InsufficientVantagesError, NoDataError
from models.probe_record import FailureKind
from models.report import Series, Strategy

logger = logging.getLogger("apiq")

INTERVAL_MS = 300_000


def _series(pattern: str, *, vantage: str, offset_ms: int = 0, endpoint_id: str = "api1", protocol=Protocol.HTTPS):
    """'s' = sucesso, 'f' = timeout, '5' = 503, '.' = sem registro"""
    records = []
    for i, mark in enumerate(pattern):
        if mark == ".":
            continue
        kwargs = {"endpoint_id": endpoint_id, "vantage": vantage, "protocol": protocol}
        timestamp = BASE_MS + i * INTERVAL_MS + offset_ms
        if mark == "s":
            records.append(make_record(timestamp, status=200, **kwargs))
        elif mark == "5":
            records.append(make_record(timestamp, status=503, **kwargs))
        else:
            records.append(make_record(timestamp, failure=FailureKind.TIMEOUT, **kwargs))
    return make_series(records)


def test_region_change_within_window():
    """Falha em A e sucesso em B 30 s depois: a troca de região funciona"""
    series = [_series("f", vantage="eu"), _series("s", vantage="us", offset_ms=30_000)]
    outcome = failover_ratios(series, Strategy.REGION_CHANGE, alignment_window_s=150)
    assert outcome.success_ratio == {"api1": 1.0}
    assert outcome.failures == {"api1": 1}


def test_simultaneous_failures_give_zero():
    series = [_series("ff5", vantage="eu"), _series("5ff", vantage="us", offset_ms=10_000)]
    outcome = failover_ratios(series, Strategy.REGION_CHANGE)
    assert outcome.success_ratio == {"api1": 0.0}
    assert outcome.min == outcome.max == outcome.avg == 0.0


@pytest.mark.parametrize(
    ("failures", "shared", "expected"),
    [(10, 10, 0.0), (9, 3, 0.5), (19, 1, 0.9), (10, 0, 1.0)],
)
def test_engineered_overlap(failures, shared, expected):
    """eu falha `failures` vezes; us falha junto em `shared` delas e responde nas demais"""
    eu = _series("f" * failures, vantage="eu")
    us = _series("f" * shared + "s" * (failures - shared), vantage="us", offset_ms=20_000)
    outcome = failover_ratios([eu, us], Strategy.REGION_CHANGE)
    # falhas simultâneas contam nos dois lados
    assert outcome.failures["api1"] == failures + shared
    assert outcome.success_ratio["api1"] == pytest.approx(expected)
    assert outcome.min == outcome.max == outcome.avg


def test_unalignable_failures_leave_the_denominator():
    """Falha sem nenhum registro da contrapartida na janela não conta"""
    eu = _series("ffff", vantage="eu")
    us = _series("s.s.", vantage="us")
    outcome = failover_ratios([eu, us], Strategy.REGION_CHANGE, alignment_window_s=150)
    assert outcome.unalignable == {"api1": 2}
    assert outcome.failures == {"api1": 2}
    assert outcome.success_ratio == {"api1": 1.0}


def test_endpoint_without_failures_is_excluded():
    """Razão indefinida (sem falhas) fica fora de min/max/avg"""
    series = [
        _series("ss", vantage="eu", endpoint_id="healthy"),
        _series("ss", vantage="us", endpoint_id="healthy"),
        _series("fs", vantage="eu", endpoint_id="flaky"),
        _series("ss", vantage="us", endpoint_id="flaky"),
    ]
    outcome = failover_ratios(series, Strategy.REGION_CHANGE)
    assert outcome.excluded == ["healthy"]
    assert outcome.success_ratio == {"flaky": 1.0}
    assert outcome.avg == 1.0


def test_protocol_switch():
    """HTTP_2_HTTPS e HTTPS_2_HTTP usam a outra série do mesmo vantage"""
    http = _series("ff5s", vantage="eu", protocol=Protocol.HTTP)
    https = _series("sfss", vantage="eu", protocol=Protocol.HTTPS, offset_ms=5_000)
    to_https = failover_ratios([http, https], Strategy.HTTP_2_HTTPS)
    assert to_https.failures == {"api1": 3}
    assert to_https.success_ratio["api1"] == pytest.approx(2 / 3)
    to_http = failover_ratios([http, https], Strategy.HTTPS_2_HTTP)
    assert to_http.success_ratio["api1"] == 0.0


def test_preconditions():
    with pytest.raises(InsufficientVantagesError):
        failover_ratios([_series("f", vantage="eu")], Strategy.REGION_CHANGE)
    with pytest.raises(NoDataError):
        failover_ratios([_series("f", vantage="eu")], Strategy.HTTP_2_HTTPS)
    with pytest.raises(ValueError):
        failover_ratios([_series("f", vantage="eu"), _series("s", vantage="us")], Strategy.REGION_CHANGE, 0)


def _brute_force(series: list[Series], window_ms: int) -> dict[str, float]:
    """Enumeração direta de todos os pares de registros"""
    failures: dict[str, int] = {}
    successes: dict[str, int] = {}
    for source in series:
        for record in source.records:
            if record.outcome.is_successable:
                continue
            nearby = [
                other_record
                for other in series
                if other.key.vantage != source.key.vantage and other.key.endpoint_id == source.key.endpoint_id
                for other_record in other.records
                if abs(other_record.timestamp_ms - record.timestamp_ms) <= window_ms
            ]
            if not nearby:
                continue
            key = source.key.endpoint_id
            failures[key] = failures.get(key, 0) + 1
            successes[key] = successes.get(key, 0) + any(r.outcome.is_successable for r in nearby)
    return {key: successes[key] / failures[key] for key in failures}


@pytest.mark.parametrize("seed", range(10))
def test_matches_brute_force_and_is_symmetric(seed):
    """Mesmo resultado da enumeração direta; trocar os nomes dos vantages não muda nada"""
    rng = random.Random(seed)
    patterns = {v: "".join(rng.choice("sssf5.") for _ in range(40)) for v in ("eu", "us", "ap")}
    offsets = {v: rng.randint(-120_000, 120_000) for v in patterns}
    series = [_series(p, vantage=v, offset_ms=offsets[v]) for v, p in patterns.items()]
    outcome = failover_ratios(series, Strategy.REGION_CHANGE, alignment_window_s=150)
    assert outcome.success_ratio == pytest.approx(_brute_force(series, 150_000))

    renamed = {"eu": "zz", "us": "aa", "ap": "mm"}
    relabeled = [_series(p, vantage=renamed[v], offset_ms=offsets[v]) for v, p in patterns.items()]
    assert failover_ratios(relabeled, Strategy.REGION_CHANGE).success_ratio == outcome.success_ratio
    logger.info(f"✅ Failover seed {seed}: {outcome.success_ratio}")
