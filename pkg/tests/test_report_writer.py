import logging
from pathlib import Path

import pandas as pd
import pytest

from analysis import AnalysisSettings, analyze, compare, render_index, render_plots, write_comparison, write_report
from models.endpoint import Protocol
from models.errors import NoDataError
from models.report import SeriesKey, Strategy

logger = logging.getLogger("apiq")

EXPECTED_TABLES = {
    "availability.csv",
    "daily_availability.csv",
    "overall_accessibility.csv",
    "ping_loss.csv",
    "latency.csv",
    "latency_histogram.csv",
    "daily_latency.csv",
    "slow_requests.csv",
    "geofactor.csv",
    "failover.csv",
    "failover_summary.csv",
    "scores.csv",
    "mean_scores.csv",
    "lasting_changes.csv",
    "score_lag.csv",
    "summary.csv",
}
EXPECTED_PLOTS = {"latency_histogram.svg", "daily_latency.svg", "score_evolution.svg", "daily_availability.svg"}


def test_analyze_pipeline(populated_logs: Path):
    result = analyze([populated_logs])
    assert len(result.series) == 6
    assert result.quarantined == 0

    https_eu = SeriesKey("api1", Protocol.HTTPS, "eu")
    assert result.availability[https_eu].accessibility == pytest.approx(114 / 120)
    assert result.geofactors[("api1", Protocol.HTTP)].value > 1.0
    assert set(result.strategies) == set(Strategy)
    events = result.lasting_changes[("api1", "eu")]
    assert len(events) == 1 and events[0].new_score == pytest.approx(1.77)
    assert result.score_lags[0].lag_s == 0.0


def test_exclusion_filter(populated_logs: Path):
    result = analyze([populated_logs], AnalysisSettings(exclude_endpoints=["api1"]))
    assert result.series == []
    assert result.score_series == {}


def test_analyze_without_data(tmp_path: Path):
    empty = tmp_path / "empty"
    empty.mkdir()
    with pytest.raises(NoDataError):
        analyze([empty])


def test_report_directory(populated_logs: Path, tmp_path: Path):
    out = tmp_path / "report"
    index = write_report(analyze([populated_logs]), out)
    assert index == out / "index.html"
    names = {p.name for p in out.iterdir()}
    assert EXPECTED_TABLES <= names
    assert EXPECTED_PLOTS <= names

    page = index.read_text(encoding="utf-8")
    for name in EXPECTED_TABLES | EXPECTED_PLOTS:
        assert f'href="{name}"' in page or f'src="{name}"' in page

    availability = pd.read_csv(out / "availability.csv")
    assert len(availability) == 6
    assert set(availability["protocol"]) == {"ICMP", "HTTP", "HTTPS"}


def test_deterministic_reports_are_byte_identical(populated_logs: Path, tmp_path: Path):
    """Duas execuções em diretórios diferentes produzem os mesmos bytes"""
    result = analyze([populated_logs])
    first = tmp_path / "one"
    second = tmp_path / "two"
    write_report(result, first, deterministic=True)
    write_report(analyze([populated_logs]), second, deterministic=True)

    names = sorted(p.name for p in first.iterdir())
    assert names == sorted(p.name for p in second.iterdir())
    for name in names:
        assert (first / name).read_bytes() == (second / name).read_bytes(), name


def test_rerender_from_tables(populated_logs: Path, tmp_path: Path):
    """Os gráficos saem das tabelas; apagar os SVGs e re-renderizar recupera os mesmos bytes"""
    out = tmp_path / "report"
    write_report(analyze([populated_logs]), out, deterministic=True)
    before = {name: (out / name).read_bytes() for name in EXPECTED_PLOTS}
    for name in EXPECTED_PLOTS:
        (out / name).unlink()

    plots = render_plots(out, deterministic=True)
    render_index(out)
    assert {p.name for p in plots} == EXPECTED_PLOTS
    assert {name: (out / name).read_bytes() for name in EXPECTED_PLOTS} == before


def test_comparison_tables(populated_logs: Path, tmp_path: Path):
    result = analyze([populated_logs])
    comparison = compare(result, result)
    assert comparison.runs.p90_flat == len(comparison.runs.deltas)
    assert comparison.census.only_in_a == comparison.census.only_in_b == []

    out = tmp_path / "comparison"
    write_comparison(comparison, out)
    deltas = pd.read_csv(out / "comparison_deltas.csv")
    assert (deltas["p90_rel_change"] == 0).all()
    assert (out / "suite_census.csv").exists()
    logger.info("✅ Relatório e comparação gravados")
