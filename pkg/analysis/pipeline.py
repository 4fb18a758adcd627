"""
Pipeline de análise: carrega os logs e executa toda operação aplicável aos dados
"""

import logging
from collections.abc import Iterable
from dataclasses import dataclass, field
from pathlib import Path

from analysis.availability import (
    availability,
    daily_availability,
    overall_accessibility,
    ping_loss_distribution,
    slow_requests,
)
from analysis.comparison import compare_runs, size_changes
from analysis.failover import failover_ratios
from analysis.latency import geofactor, latency_stats, resample_daily, vantage_means
from analysis.loader import expand_log_paths, load_scans, load_series, select_series
from analysis.security import (
    cross_vantage_lag,
    lasting_changes,
    mean_score_per_endpoint,
    mean_scores,
    score_series,
    suite_census,
)
from config.constants import (
    DEFAULT_ALIGNMENT_WINDOW_S,
    DEFAULT_GAP_THRESHOLD,
    DEFAULT_HISTOGRAM_BIN_MS,
    DEFAULT_LASTING_MIN_REL_CHANGE,
    DEFAULT_LASTING_PERSISTENCE,
    DEFAULT_PROBE_INTERVAL_S,
    SLOW_REQUEST_THRESHOLD_MS,
)
from models.cipher import ScanLogEntry
from models.endpoint import Protocol
from models.errors import InsufficientVantagesError, NoDataError
from models.report import (
    AvailabilityReport,
    ChangeEvent,
    DailyAvailability,
    GeofactorResult,
    LagEntry,
    LatencyStats,
    LoadResult,
    PingLossSummary,
    RangeSummary,
    RunComparison,
    Series,
    SeriesKey,
    SizeChange,
    Strategy,
    StrategyOutcome,
    SuiteCensus,
)

logger = logging.getLogger("apiq")


@dataclass
class AnalysisSettings:
    expected_interval_s: int = DEFAULT_PROBE_INTERVAL_S
    gap_threshold: float = DEFAULT_GAP_THRESHOLD
    alignment_window_s: int = DEFAULT_ALIGNMENT_WINDOW_S
    bin_width_ms: float = DEFAULT_HISTOGRAM_BIN_MS
    min_rel_change: float = DEFAULT_LASTING_MIN_REL_CHANGE
    persistence: int = DEFAULT_LASTING_PERSISTENCE
    slow_threshold_ms: float = SLOW_REQUEST_THRESHOLD_MS
    exclude_endpoints: list[str] = field(default_factory=list)


@dataclass
class AnalysisResult:
    settings: AnalysisSettings
    load: LoadResult
    scans: list[ScanLogEntry] = field(default_factory=list)
    scan_quarantined: int = 0
    availability: dict[SeriesKey, AvailabilityReport] = field(default_factory=dict)
    daily_availability: dict[SeriesKey, list[DailyAvailability]] = field(default_factory=dict)
    overall_accessibility: dict[Protocol, RangeSummary] = field(default_factory=dict)
    ping_losses: dict[str, PingLossSummary] = field(default_factory=dict)
    latency: dict[SeriesKey, LatencyStats] = field(default_factory=dict)
    daily_latency: dict[SeriesKey, dict[str, float]] = field(default_factory=dict)
    slow_requests: dict[SeriesKey, int] = field(default_factory=dict)
    geofactors: dict[tuple[str, Protocol], GeofactorResult] = field(default_factory=dict)
    strategies: dict[Strategy, StrategyOutcome] = field(default_factory=dict)
    score_series: dict[tuple[str, str], list[tuple[int, float]]] = field(default_factory=dict)
    lasting_changes: dict[tuple[str, str], list[ChangeEvent]] = field(default_factory=dict)
    mean_scores: dict[tuple[str, str], float] = field(default_factory=dict)
    score_lags: list[LagEntry] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def series(self) -> list[Series]:
        return select_series(self.load.series, self.settings.exclude_endpoints)

    @property
    def quarantined(self) -> int:
        return self.load.quarantined + self.scan_quarantined


@dataclass
class ComparisonResult:
    runs: RunComparison
    sizes: list[SizeChange]
    census: SuiteCensus


def _analyze_series(result: AnalysisResult) -> None:
    settings = result.settings
    for s in result.series:
        result.availability[s.key] = availability(s)
        result.daily_availability[s.key] = daily_availability(s)
        try:
            result.latency[s.key] = latency_stats(s, settings.bin_width_ms)
        except NoDataError:
            result.notes.append(f"{s.key.label()}: sem latências bem-sucedidas")
        result.daily_latency[s.key] = resample_daily(s)
        if s.key.protocol != Protocol.ICMP:
            result.slow_requests[s.key] = slow_requests(s, settings.slow_threshold_ms)

    result.overall_accessibility = overall_accessibility(result.availability)
    result.ping_losses = ping_loss_distribution(result.series)

    pairs = {(s.key.endpoint_id, s.key.protocol) for s in result.series}
    for endpoint_id, protocol in sorted(pairs, key=lambda k: (k[0], k[1].value)):
        try:
            result.geofactors[(endpoint_id, protocol)] = geofactor(vantage_means(result.series, endpoint_id, protocol))
        except InsufficientVantagesError as e:
            result.notes.append(f"geofactor {endpoint_id}/{protocol.value}: {str(e)}")

    for strategy in Strategy:
        try:
            result.strategies[strategy] = failover_ratios(result.series, strategy, settings.alignment_window_s)
        except (InsufficientVantagesError, NoDataError) as e:
            result.notes.append(f"{strategy.value}: {str(e)}")


def _analyze_scans(result: AnalysisResult) -> None:
    settings = result.settings
    excluded = set(settings.exclude_endpoints)
    scans = [entry for entry in result.scans if entry.endpoint_id not in excluded]
    result.score_series = score_series(scans)
    result.mean_scores = mean_scores(scans)
    result.lasting_changes = {
        key: lasting_changes(values, settings.min_rel_change, settings.persistence)
        for key, values in result.score_series.items()
    }
    result.score_lags = cross_vantage_lag(scans, settings.min_rel_change, settings.persistence)


def analyze(paths: Iterable[str | Path], settings: AnalysisSettings | None = None) -> AnalysisResult:
    """
    Executa load_series e todas as operações aplicáveis.

    Raises:
        FileNotFoundError: caminho de log inexistente
        NoDataError: nenhum registro nem scan legível
    """
    settings = settings or AnalysisSettings()
    record_paths, scan_paths = expand_log_paths(paths)
    load = load_series(record_paths, settings.expected_interval_s, settings.gap_threshold)
    scans, scan_quarantined = load_scans(scan_paths)
    if not load.series and not scans:
        raise NoDataError("Nenhum registro legível nos logs informados")

    result = AnalysisResult(settings=settings, load=load, scans=scans, scan_quarantined=scan_quarantined)
    _analyze_series(result)
    _analyze_scans(result)
    logger.info(
        f"✅ Análise concluída: {len(result.series)} séries, {len(scans)} scans, {result.quarantined} em quarentena"
    )
    return result


def compare(result_a: AnalysisResult, result_b: AnalysisResult) -> ComparisonResult:
    """Compara duas execuções já analisadas com as mesmas configurações"""
    excluded = result_a.settings.exclude_endpoints
    runs = compare_runs(
        result_a.latency,
        result_b.latency,
        mean_score_per_endpoint(e for e in result_a.scans if e.endpoint_id not in excluded),
        mean_score_per_endpoint(e for e in result_b.scans if e.endpoint_id not in excluded),
    )
    return ComparisonResult(
        runs=runs,
        sizes=size_changes(result_a.series, result_b.series),
        census=suite_census(
            (e for e in result_a.scans if e.endpoint_id not in excluded),
            (e for e in result_b.scans if e.endpoint_id not in excluded),
        ),
    )
