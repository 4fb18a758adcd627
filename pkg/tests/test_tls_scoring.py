import logging
from pathlib import Path

import pytest

from models.cipher import CipherScanRecord, KeyExchange
from models.errors import EmptySuiteListError, UnknownSuiteError
from tlsscan import SuiteTable, classify_suite, load_suite_table, score_bounds, score_server, score_suite

logger = logging.getLogger("apiq")

PREFERENCE = ["ECDHE-RSA-AES256-SHA384", "ECDHE-ECDSA-AES128-SHA", "RC4-SHA"]


@pytest.mark.parametrize(
    ("name", "score"),
    [
        ("ECDHE-RSA-AES256-SHA384", 1.1),
        ("ECDHE-RSA-AES256-GCM-SHA384", 1.1),
        ("ECDHE-ECDSA-AES128-SHA", 1.0),
        ("TLS_AES_128_GCM_SHA256", 1.0),
        ("AES128-SHA", 0.0),
        ("AES256-SHA", 0.1),
        ("RC4-SHA", -1.0),
        ("RC4-MD5", -1.0),
        ("DES-CBC3-SHA", -1.0),
        ("EXP-RC4-MD5", -1.0),
    ],
)
def test_suite_scores(name, score):
    """baseScore (-1/0/1) mais 0.1 para chaves de 256 bits"""
    assert score_suite(name) == pytest.approx(score)


def test_classification_fields():
    info = classify_suite("RC4-MD5")
    assert info.key_exchange == KeyExchange.STATIC_RSA
    assert info.cipher_family == "RC4"
    assert info.mac == "MD5"
    assert info.base_score == -1


def test_server_score_weights_by_rank():
    """Mesmas suites, ordens opostas: a preferência pesa 1/rank"""
    table = load_suite_table()
    suites = [table.classify(name) for name in PREFERENCE]
    assert score_server(suites) == pytest.approx(1.1 + 1.0 / 2 - 1.0 / 3)
    assert score_server(suites) == pytest.approx(1.267, abs=1e-3)
    assert score_server(list(reversed(suites))) == pytest.approx(-1.0 + 1.0 / 2 + 1.1 / 3)
    assert score_server(list(reversed(suites))) == pytest.approx(-0.133, abs=1e-3)
    assert score_server([1.1, 1.0, -1.0]) == score_server(suites)


def test_score_bounds():
    """Limites: todas -1 e todas 1.1"""
    low, high = score_bounds(1)
    assert (low, high) == (pytest.approx(-1.0), pytest.approx(1.1))
    low, high = score_bounds(3)
    assert low == pytest.approx(-(1 + 1 / 2 + 1 / 3))
    assert high == pytest.approx(1.1 * (1 + 1 / 2 + 1 / 3))
    assert score_server([-1.0] * 3) == pytest.approx(low)
    assert score_server([1.1] * 3) == pytest.approx(high)


def test_empty_suite_list():
    with pytest.raises(EmptySuiteListError):
        score_server([])
    with pytest.raises(EmptySuiteListError):
        score_bounds(0)


def test_unknown_suite_is_never_zero():
    """Suite fora da tabela é erro explícito, nunca score 0"""
    with pytest.raises(UnknownSuiteError) as excinfo:
        classify_suite("MADE-UP-SUITE")
    assert str(excinfo.value) == "UNKNOWN_SUITE: MADE-UP-SUITE"


def test_custom_table(tmp_path: Path):
    """Suites novas entram como linhas no arquivo"""
    path = tmp_path / "suites.csv"
    path.write_text(
        "# comentário\nNEW-SUITE,ECDHE,256,AES-GCM,AEAD\nOLD-SUITE,STATIC_RSA,56,DES,SHA1\n", encoding="utf-8"
    )
    table = SuiteTable.load(path)
    assert len(table) == 2
    assert "NEW-SUITE" in table
    assert table.classify("NEW-SUITE").score == pytest.approx(1.1)
    assert table.classify("OLD-SUITE").score == pytest.approx(-1.0)
    assert classify_suite("NEW-SUITE", table).name == "NEW-SUITE"


@pytest.mark.parametrize(
    "row",
    ["BROKEN,ECDHE,256,AES\n", "BROKEN,QUANTUM,256,AES,SHA1\n", "BROKEN,ECDHE,many,AES,SHA1\n"],
)
def test_custom_table_bad_rows(tmp_path: Path, row: str):
    path = tmp_path / "suites.csv"
    path.write_text(row, encoding="utf-8")
    with pytest.raises(ValueError):
        SuiteTable.load(path)


def test_scan_record_checks_score():
    """server_score precisa bater com a soma ponderada"""
    table = load_suite_table()
    suites = [table.classify(name) for name in PREFERENCE]
    record = CipherScanRecord(
        timestamp_ms=0, vantage="eu", endpoint_id="api1", suites=suites, server_score=score_server(suites)
    )
    assert record.suite_names == PREFERENCE
    with pytest.raises(ValueError):
        CipherScanRecord(timestamp_ms=0, vantage="eu", endpoint_id="api1", suites=suites, server_score=2.0)
    logger.info("✅ Scores de suites e servidores conferem")
