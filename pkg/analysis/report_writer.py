"""
Diretório de relatório: tabelas CSV (uma por métrica), gráficos SVG e index.html

Os gráficos são desenhados a partir das próprias tabelas, então `apiq report`
consegue re-renderizar um diretório existente sem os logs originais.
"""

import html
import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from analysis.pipeline import AnalysisResult, ComparisonResult  # noqa: E402
from models.endpoint import Protocol  # noqa: E402
from models.report import SeriesKey  # noqa: E402

logger = logging.getLogger("apiq")

SVG_HASH_SALT = "apiq"
NOTES_FILE = "notes.txt"
INDEX_FILE = "index.html"

HISTOGRAM_PLOT = "latency_histogram.svg"
DAILY_LATENCY_PLOT = "daily_latency.svg"
SCORE_PLOT = "score_evolution.svg"
DAILY_AVAILABILITY_PLOT = "daily_availability.svg"


def _key_columns(key: SeriesKey) -> dict:
    return {"endpoint": key.endpoint_id, "protocol": key.protocol.value, "vantage": key.vantage}


def _write_csv(out_dir: Path, name: str, rows: list[dict], columns: list[str]) -> Path:
    path = out_dir / name
    frame = pd.DataFrame(rows, columns=columns)
    frame.to_csv(path, index=False, lineterminator="\n")
    return path


def _availability_rows(result: AnalysisResult) -> list[dict]:
    rows = []
    for key, report in sorted(result.availability.items(), key=lambda item: item[0].label()):
        rows.append(
            {
                **_key_columns(key),
                "status": report.status.value,
                "pingability": report.pingability,
                "accessibility": report.accessibility,
                "successability": report.successability,
                "records": report.denominator.get("records", 0),
                "packets_sent": report.packets_sent,
                "packets_lost": report.packets_lost,
                "fail_4xx": report.failure_distribution.get("4xx"),
                "fail_5xx": report.failure_distribution.get("5xx"),
                "fail_none": report.failure_distribution.get("None"),
            }
        )
    return rows


def _latency_tables(result: AnalysisResult) -> tuple[list[dict], list[dict], list[dict]]:
    stats, bins, daily = [], [], []
    for key, latency in sorted(result.latency.items(), key=lambda item: item[0].label()):
        stats.append(
            {
                **_key_columns(key),
                "count": latency.count,
                "mean_ms": latency.mean,
                "stddev_ms": latency.stddev,
                "p50_ms": latency.p50,
                "p90_ms": latency.p90,
                "p99_ms": latency.p99,
            }
        )
        bins.extend(
            {**_key_columns(key), "bin_start_ms": start, "bin_width_ms": latency.bin_width_ms, "count": count}
            for start, count in latency.histogram
        )
    for key, days in sorted(result.daily_latency.items(), key=lambda item: item[0].label()):
        daily.extend({**_key_columns(key), "day": day, "mean_latency_ms": value} for day, value in days.items())
    return stats, bins, daily


def _write_tables(result: AnalysisResult, out_dir: Path) -> None:
    keyed = ["endpoint", "protocol", "vantage"]
    _write_csv(
        out_dir,
        "availability.csv",
        _availability_rows(result),
        keyed
        + [
            "status",
            "pingability",
            "accessibility",
            "successability",
            "records",
            "packets_sent",
            "packets_lost",
            "fail_4xx",
            "fail_5xx",
            "fail_none",
        ],
    )

    daily_rows = [
        {**_key_columns(key), **day.model_dump()}
        for key, days in sorted(result.daily_availability.items(), key=lambda item: item[0].label())
        for day in days
    ]
    _write_csv(
        out_dir,
        "daily_availability.csv",
        daily_rows,
        keyed + ["day", "records", "pingability", "accessibility", "successability"],
    )

    _write_csv(
        out_dir,
        "overall_accessibility.csv",
        [
            {"protocol": protocol.value, **summary.model_dump()}
            for protocol, summary in sorted(result.overall_accessibility.items(), key=lambda item: item[0].value)
        ],
        ["protocol", "count", "min", "max", "avg"],
    )

    _write_csv(
        out_dir,
        "ping_loss.csv",
        [summary.model_dump() for _, summary in sorted(result.ping_losses.items())],
        ["endpoint_id", "best", "worst", "avg", "worst_vantage", "packets_sent", "packets_lost"],
    )

    stats, bins, daily = _latency_tables(result)
    _write_csv(
        out_dir, "latency.csv", stats, keyed + ["count", "mean_ms", "stddev_ms", "p50_ms", "p90_ms", "p99_ms"]
    )
    _write_csv(out_dir, "latency_histogram.csv", bins, keyed + ["bin_start_ms", "bin_width_ms", "count"])
    _write_csv(out_dir, "daily_latency.csv", daily, keyed + ["day", "mean_latency_ms"])

    _write_csv(
        out_dir,
        "slow_requests.csv",
        [
            {**_key_columns(key), "slow_requests": count, "threshold_ms": result.settings.slow_threshold_ms}
            for key, count in sorted(result.slow_requests.items(), key=lambda item: item[0].label())
        ],
        keyed + ["slow_requests", "threshold_ms"],
    )

    _write_csv(
        out_dir,
        "geofactor.csv",
        [
            {
                "endpoint": endpoint_id,
                "protocol": protocol.value,
                "geofactor": geo.value,
                "vantages": ";".join(geo.vantages),
                "excluded": ";".join(geo.excluded),
            }
            for (endpoint_id, protocol), geo in sorted(
                result.geofactors.items(), key=lambda item: (item[0][0], item[0][1].value)
            )
        ],
        ["endpoint", "protocol", "geofactor", "vantages", "excluded"],
    )

    strategy_rows, strategy_summary = [], []
    for strategy, outcome in sorted(result.strategies.items(), key=lambda item: item[0].value):
        strategy_summary.append(
            {
                "strategy": strategy.value,
                "min": outcome.min,
                "max": outcome.max,
                "avg": outcome.avg,
                "excluded": ";".join(outcome.excluded),
            }
        )
        for endpoint_id in sorted(set(outcome.failures) | set(outcome.unalignable)):
            strategy_rows.append(
                {
                    "strategy": strategy.value,
                    "endpoint": endpoint_id,
                    "failures": outcome.failures.get(endpoint_id, 0),
                    "unalignable": outcome.unalignable.get(endpoint_id, 0),
                    "success_ratio": outcome.success_ratio.get(endpoint_id),
                }
            )
    _write_csv(
        out_dir, "failover.csv", strategy_rows, ["strategy", "endpoint", "failures", "unalignable", "success_ratio"]
    )
    _write_csv(out_dir, "failover_summary.csv", strategy_summary, ["strategy", "min", "max", "avg", "excluded"])

    _write_csv(
        out_dir,
        "scores.csv",
        [
            {"endpoint": endpoint_id, "vantage": vantage, "timestamp_ms": timestamp, "score": score}
            for (endpoint_id, vantage), values in result.score_series.items()
            for timestamp, score in values
        ],
        ["endpoint", "vantage", "timestamp_ms", "score"],
    )
    _write_csv(
        out_dir,
        "mean_scores.csv",
        [
            {"endpoint": endpoint_id, "vantage": vantage, "mean_score": score}
            for (endpoint_id, vantage), score in result.mean_scores.items()
        ],
        ["endpoint", "vantage", "mean_score"],
    )
    _write_csv(
        out_dir,
        "lasting_changes.csv",
        [
            {"endpoint": endpoint_id, "vantage": vantage, **event.model_dump()}
            for (endpoint_id, vantage), events in result.lasting_changes.items()
            for event in events
        ],
        ["endpoint", "vantage", "timestamp_ms", "old_score", "new_score", "relative_change", "flagged_zero_base"],
    )
    _write_csv(
        out_dir,
        "score_lag.csv",
        [lag.model_dump() for lag in result.score_lags],
        ["endpoint_id", "vantage_first", "vantage_second", "first_change_ms", "lag_s"],
    )

    _write_csv(
        out_dir,
        "summary.csv",
        [
            {"metric": "series", "value": len(result.series)},
            {"metric": "records", "value": sum(len(s.records) for s in result.series)},
            {"metric": "gaps", "value": sum(len(s.gaps) for s in result.series)},
            {"metric": "scans", "value": len(result.scans)},
            {"metric": "quarantined", "value": result.quarantined},
            {"metric": "duplicates", "value": result.load.duplicates},
        ],
        ["metric", "value"],
    )


def _save(fig, path: Path, deterministic: bool) -> None:
    if deterministic:
        with plt.rc_context({"svg.hashsalt": SVG_HASH_SALT}):
            fig.savefig(path, format="svg", metadata={"Date": None})
    else:
        fig.savefig(path, format="svg")
    plt.close(fig)


def _read(out_dir: Path, name: str) -> pd.DataFrame | None:
    path = out_dir / name
    if not path.exists():
        return None
    frame = pd.read_csv(path)
    return None if frame.empty else frame


def _plot_histogram(out_dir: Path, deterministic: bool) -> bool:
    frame = _read(out_dir, "latency_histogram.csv")
    if frame is None:
        return False
    fig, ax = plt.subplots(figsize=(10, 6))
    for (endpoint, protocol, vantage), group in frame.groupby(["endpoint", "protocol", "vantage"], sort=True):
        ax.step(group["bin_start_ms"], group["count"], where="post", label=f"{endpoint}/{protocol}@{vantage}")
    ax.set_yscale("log")
    ax.set_xlabel("Latência (ms)")
    ax.set_ylabel("Medições")
    ax.set_title("Histograma de latência")
    ax.legend(fontsize="small")
    ax.grid(True, alpha=0.3)
    _save(fig, out_dir / HISTOGRAM_PLOT, deterministic)
    return True


def _plot_daily_latency(out_dir: Path, deterministic: bool) -> bool:
    frame = _read(out_dir, "daily_latency.csv")
    if frame is None:
        return False
    fig, ax = plt.subplots(figsize=(12, 6))
    for (endpoint, protocol, vantage), group in frame.groupby(["endpoint", "protocol", "vantage"], sort=True):
        ax.plot(group["day"], group["mean_latency_ms"], marker="o", label=f"{endpoint}/{protocol}@{vantage}")
    ax.set_xlabel("Dia (UTC)")
    ax.set_ylabel("Latência média (ms)")
    ax.set_title("Latência diária por vantage")
    ax.tick_params(axis="x", rotation=45)
    ax.legend(fontsize="small")
    ax.grid(True, alpha=0.3)
    _save(fig, out_dir / DAILY_LATENCY_PLOT, deterministic)
    return True


def _plot_scores(out_dir: Path, deterministic: bool) -> bool:
    frame = _read(out_dir, "scores.csv")
    if frame is None:
        return False
    frame["time"] = pd.to_datetime(frame["timestamp_ms"], unit="ms", utc=True)
    fig, ax = plt.subplots(figsize=(12, 6))
    for (endpoint, vantage), group in frame.groupby(["endpoint", "vantage"], sort=True):
        ax.plot(group["time"], group["score"], drawstyle="steps-post", label=f"{endpoint}@{vantage}")
    ax.set_xlabel("Tempo (UTC)")
    ax.set_ylabel("Score do servidor")
    ax.set_title("Evolução do score de segurança")
    ax.legend(fontsize="small")
    ax.grid(True, alpha=0.3)
    _save(fig, out_dir / SCORE_PLOT, deterministic)
    return True


def _plot_daily_availability(out_dir: Path, deterministic: bool) -> bool:
    frame = _read(out_dir, "daily_availability.csv")
    if frame is None:
        return False
    ping = frame[frame["protocol"] == Protocol.ICMP.value].groupby("day")["pingability"].mean()
    access = frame[frame["protocol"] != Protocol.ICMP.value].groupby("day")["accessibility"].mean()
    if ping.dropna().empty and access.dropna().empty:
        return False
    fig, ax = plt.subplots(figsize=(12, 6))
    if not ping.dropna().empty:
        ax.plot(ping.index, ping.values, marker="o", label="pingability")
    if not access.dropna().empty:
        ax.plot(access.index, access.values, marker="s", label="accessibility")
    ax.set_xlabel("Dia (UTC)")
    ax.set_ylabel("Fração")
    ax.set_title("Pingability x accessibility por dia")
    ax.tick_params(axis="x", rotation=45)
    ax.legend()
    ax.grid(True, alpha=0.3)
    _save(fig, out_dir / DAILY_AVAILABILITY_PLOT, deterministic)
    return True


def render_plots(out_dir: str | Path, deterministic: bool = False) -> list[Path]:
    """Desenha os gráficos a partir das tabelas existentes; retorna os arquivos gerados"""
    out_dir = Path(out_dir)
    plots = []
    for name, draw in (
        (HISTOGRAM_PLOT, _plot_histogram),
        (DAILY_LATENCY_PLOT, _plot_daily_latency),
        (SCORE_PLOT, _plot_scores),
        (DAILY_AVAILABILITY_PLOT, _plot_daily_availability),
    ):
        if draw(out_dir, deterministic):
            plots.append(out_dir / name)
        else:
            logger.info(f"Gráfico {name} omitido: sem dados")
    return plots


def render_index(out_dir: str | Path, title: str = "apiq - relatório") -> Path:
    """index.html com links para todas as tabelas e gráficos do diretório"""
    out_dir = Path(out_dir)
    tables = sorted(p.name for p in out_dir.glob("*.csv"))
    plots = sorted(p.name for p in out_dir.glob("*.svg"))
    notes_path = out_dir / NOTES_FILE
    notes = []
    if notes_path.exists():
        notes = [line for line in notes_path.read_text(encoding="utf-8").splitlines() if line]

    def links(names: list[str]) -> str:
        return "\n".join(f'<li><a href="{html.escape(n)}">{html.escape(n)}</a></li>' for n in names) or "<li>-</li>"

    figures = "\n".join(
        f'<figure><img src="{html.escape(n)}" alt="{html.escape(n)}"><figcaption>{html.escape(n)}</figcaption></figure>'
        for n in plots
    )
    notes_html = "\n".join(f"<li>{html.escape(n)}</li>" for n in notes)
    page = f"""<!DOCTYPE html>
<html lang="pt-BR">
<head><meta charset="utf-8"><title>{html.escape(title)}</title></head>
<body>
<h1>{html.escape(title)}</h1>
<h2>Tabelas</h2>
<ul>
{links(tables)}
</ul>
<h2>Gráficos</h2>
{figures}
<h2>Observações</h2>
<ul>
{notes_html or "<li>-</li>"}
</ul>
</body>
</html>
"""
    index = out_dir / INDEX_FILE
    index.write_text(page, encoding="utf-8")
    return index


def write_report(result: AnalysisResult, out_dir: str | Path, deterministic: bool = False) -> Path:
    """Escreve tabelas, gráficos e índice; retorna o caminho do index.html"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_tables(result, out_dir)
    (out_dir / NOTES_FILE).write_text("".join(f"{note}\n" for note in result.notes), encoding="utf-8")
    render_plots(out_dir, deterministic)
    index = render_index(out_dir)
    logger.info(f"✅ Relatório gravado em {out_dir}")
    return index


def write_comparison(comparison: ComparisonResult, out_dir: str | Path) -> Path:
    """Tabelas da comparação entre duas execuções"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    runs = comparison.runs
    _write_csv(
        out_dir,
        "comparison_deltas.csv",
        [delta.model_dump(mode="json") for delta in runs.deltas],
        ["endpoint_id", "vantage", "protocol", "p90_a", "p90_b", "p90_rel_change", "stddev_rel_change"],
    )
    _write_csv(
        out_dir,
        "comparison_summary.csv",
        [
            {"metric": "p90_increases", "value": runs.p90_increases},
            {"metric": "p90_decreases", "value": runs.p90_decreases},
            {"metric": "p90_flat", "value": runs.p90_flat},
            {"metric": "p90_undefined", "value": runs.p90_undefined},
            {"metric": "discontinued", "value": ";".join(runs.discontinued)},
            {"metric": "new", "value": ";".join(runs.new)},
            {"metric": "median_abs_score_change", "value": runs.median_abs_score_change},
        ],
        ["metric", "value"],
    )
    _write_csv(
        out_dir,
        "score_changes.csv",
        [{"endpoint": endpoint_id, "rel_change": change} for endpoint_id, change in runs.score_changes.items()],
        ["endpoint", "rel_change"],
    )
    _write_csv(
        out_dir,
        "size_changes.csv",
        [change.model_dump(mode="json") for change in comparison.sizes],
        ["endpoint_id", "protocol", "mean_bytes_a", "mean_bytes_b", "rel_change"],
    )
    census = comparison.census
    _write_csv(
        out_dir,
        "suite_census.csv",
        [{"run": "a", "suite": name} for name in census.only_in_a]
        + [{"run": "b", "suite": name} for name in census.only_in_b],
        ["run", "suite"],
    )
    _write_csv(
        out_dir,
        "weak_suites.csv",
        [
            {"run": "a", "weak_occurrences": census.weak_occurrences_a},
            {"run": "b", "weak_occurrences": census.weak_occurrences_b},
        ],
        ["run", "weak_occurrences"],
    )
    index = render_index(out_dir, title="apiq - comparação")
    logger.info(f"✅ Comparação gravada em {out_dir}")
    return index
