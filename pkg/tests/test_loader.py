import logging
import random
from pathlib import Path

import pytest

from analysis import expand_log_paths, find_gaps, load_scans, load_series, select_series
from conftest import BASE_MS, make_record, write_log
from models.endpoint import Protocol
from models.report import SeriesKey

logger = logging.getLogger("apiq")

INTERVAL_MS = 300_000


def test_regular_series_has_no_gaps(log_dir: Path):
    """12 registros a cada 300 s: uma série sem lacunas"""
    write_log(log_dir / "2018-01-01_eu.log", [make_record(BASE_MS + i * INTERVAL_MS) for i in range(12)])
    result = load_series([log_dir])
    assert len(result.series) == 1
    (series,) = result.series.values()
    assert len(series.records) == 12
    assert series.gaps == ()
    assert result.quarantined == 0


def test_hole_becomes_gap(log_dir: Path):
    """Buraco de 1800 s com intervalo 300 s e limiar 2.0: uma lacuna [t, t+1800]"""
    stamps = [BASE_MS + i * INTERVAL_MS for i in range(6)]
    hole_start = stamps[-1]
    stamps += [hole_start + 1_800_000 + i * INTERVAL_MS for i in range(6)]
    write_log(log_dir / "2018-01-01_eu.log", [make_record(t) for t in stamps])

    (series,) = load_series([log_dir], expected_interval_s=300, gap_threshold=2.0).series.values()
    assert series.gaps == ((hole_start, hole_start + 1_800_000),)


def test_find_gaps_threshold():
    """Um disparo perdido (600 s) é jitter; dois (900 s) já são lacuna"""
    assert find_gaps([0, 600_000], 300, 2.0) == []
    assert find_gaps([0, 600_001], 300, 2.0) == [(0, 600_001)]
    assert find_gaps([0, 900_000, 1_200_000], 300, 2.0) == [(0, 900_000)]


def test_interleaved_series_are_partitioned(log_dir: Path):
    """Registros de 3 séries misturados num arquivo: 3 séries, cada uma ordenada"""
    records = []
    for i in range(10):
        records.append(make_record(BASE_MS + i * INTERVAL_MS, protocol=Protocol.HTTP))
        records.append(make_record(BASE_MS + i * INTERVAL_MS + 1000, protocol=Protocol.HTTPS))
        records.append(make_record(BASE_MS + i * INTERVAL_MS + 2000, vantage="us"))
    random.Random(7).shuffle(records)
    write_log(log_dir / "mixed.log", records)

    result = load_series([log_dir / "mixed.log"])
    assert set(result.series) == {
        SeriesKey("api1", Protocol.HTTP, "eu"),
        SeriesKey("api1", Protocol.HTTPS, "eu"),
        SeriesKey("api1", Protocol.HTTPS, "us"),
    }
    for series in result.series.values():
        stamps = [r.timestamp_ms for r in series.records]
        assert stamps == sorted(stamps) and len(stamps) == 10


def test_malformed_lines_are_quarantined(log_dir: Path):
    """Linhas inválidas são contadas, nunca abortam a leitura"""
    write_log(
        log_dir / "2018-01-01_eu.log",
        [make_record(BASE_MS), make_record(BASE_MS + INTERVAL_MS)],
        extra_lines=["lixo", f"{BASE_MS}|eu|api1|HTTPS|1.0|SUCCESS|503|0|||", f"{BASE_MS + 5}|eu|api1"],
    )
    result = load_series([log_dir])
    assert result.quarantined == 3
    assert len(next(iter(result.series.values())).records) == 2


def test_file_order_does_not_matter(tmp_path: Path):
    """Mesmo resultado qualquer que seja a ordem dos arquivos"""
    records = [make_record(BASE_MS + i * INTERVAL_MS, latency_ms=float(i)) for i in range(20)]
    first = write_log(tmp_path / "a.log", records[::2])
    second = write_log(tmp_path / "b.log", records[1::2])
    assert load_series([first, second]) == load_series([second, first])


def test_duplicates_are_dropped(tmp_path: Path):
    record = make_record(BASE_MS)
    path = write_log(tmp_path / "dup.log", [record, record])
    result = load_series([path])
    assert result.duplicates == 1
    assert len(next(iter(result.series.values())).records) == 1


def test_empty_input():
    result = load_series([])
    assert result.series == {}
    with pytest.raises(ValueError):
        load_series([], gap_threshold=1.0)


def test_expand_and_scans(log_dir: Path):
    write_log(log_dir / "2018-01-01_eu.log", [make_record(BASE_MS)])
    (log_dir / "2018-01-01_eu.scan.log").write_text(
        f"{BASE_MS}|eu|api1|1.100000|ECDHE-RSA-AES256-SHA384\nquebrada\n", encoding="utf-8"
    )
    (log_dir / "notes.txt").write_text("ignorado", encoding="utf-8")
    records, scans = expand_log_paths([log_dir])
    assert [p.name for p in records] == ["2018-01-01_eu.log"]
    assert [p.name for p in scans] == ["2018-01-01_eu.scan.log"]

    entries, quarantined = load_scans(scans)
    assert len(entries) == 1 and quarantined == 1
    assert entries[0].suite_names == ("ECDHE-RSA-AES256-SHA384",)

    with pytest.raises(FileNotFoundError):
        expand_log_paths([log_dir / "nope"])


def test_select_series_excludes_endpoints(log_dir: Path):
    write_log(
        log_dir / "x.log",
        [make_record(BASE_MS, endpoint_id="keep"), make_record(BASE_MS, endpoint_id="offline")],
    )
    series = load_series([log_dir / "x.log"]).series
    assert [s.key.endpoint_id for s in select_series(series, ["offline"])] == ["keep"]
    logger.info("✅ Loader particiona, ordena e separa lacunas")
