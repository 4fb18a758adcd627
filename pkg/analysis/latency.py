"""
Latência: percentis (nearest-rank), histograma, geofactor e reamostragem diária
"""

import logging
import math
from collections import Counter
from collections.abc import Iterable, Sequence
from fractions import Fraction

import numpy as np
import pandas as pd

from analysis.loader import select_series
from config.constants import DEFAULT_HISTOGRAM_BIN_MS
from models.endpoint import Protocol
from models.errors import InsufficientVantagesError, NoDataError
from models.probe_record import ProbeRecord
from models.report import GeofactorResult, LatencyStats, Series, SeriesKey

logger = logging.getLogger("apiq")


def nearest_rank(sorted_values: Sequence[float], percentile: float) -> float:
    """Percentil pelo método nearest-rank: o menor valor com ao menos p% dos dados <= ele"""
    if not sorted_values:
        raise NoDataError("Percentil de lista vazia")
    if not 0 < percentile <= 100:
        raise ValueError("percentile deve estar em (0, 100]")
    rank = math.ceil(Fraction(str(percentile)) / 100 * len(sorted_values))
    return float(sorted_values[max(rank, 1) - 1])


def _successable_latencies(source: Series | Iterable[ProbeRecord]) -> list[float]:
    records = source.records if isinstance(source, Series) else source
    return [r.latency_ms for r in records if r.outcome.is_successable]


def histogram(latencies: Iterable[float], bin_width_ms: float = DEFAULT_HISTOGRAM_BIN_MS) -> list[tuple[float, int]]:
    """Pares (início do bin, contagem) apenas para bins não vazios"""
    if bin_width_ms <= 0:
        raise ValueError("bin_width_ms deve ser > 0")
    counts = Counter(math.floor(value / bin_width_ms) for value in latencies)
    return [(index * bin_width_ms, counts[index]) for index in sorted(counts)]


def latency_stats(
    source: Series | Iterable[ProbeRecord], bin_width_ms: float = DEFAULT_HISTOGRAM_BIN_MS
) -> LatencyStats:
    """
    Estatísticas sobre registros bem-sucedidos (2xx/3xx e ecos respondidos).

    Raises:
        NoDataError: nenhum registro bem-sucedido
    """
    values = sorted(_successable_latencies(source))
    if not values:
        raise NoDataError("Nenhuma latência bem-sucedida para calcular estatísticas")
    array = np.asarray(values, dtype=float)
    return LatencyStats(
        count=len(values),
        mean=float(array.mean()),
        stddev=float(array.std(ddof=0)),
        p50=nearest_rank(values, 50),
        p90=nearest_rank(values, 90),
        p99=nearest_rank(values, 99),
        bin_width_ms=bin_width_ms,
        histogram=histogram(values, bin_width_ms),
    )


def vantage_means(
    series: dict[SeriesKey, Series] | Iterable[Series], endpoint_id: str, protocol: Protocol
) -> dict[str, float | None]:
    """Latência média por vantage (None quando o vantage não tem registros bem-sucedidos)"""
    means: dict[str, float | None] = {}
    for s in select_series(series):
        if s.key.endpoint_id != endpoint_id or s.key.protocol != protocol:
            continue
        values = _successable_latencies(s)
        means[s.key.vantage] = float(np.mean(values)) if values else None
    return dict(sorted(means.items()))


def geofactor(means: dict[str, float | None]) -> GeofactorResult:
    """
    max(média) / min(média) entre vantages. Vantages sem dados são excluídos com nota.

    Raises:
        InsufficientVantagesError: menos de 2 vantages com dados
    """
    usable = {vantage: mean for vantage, mean in means.items() if mean is not None and mean > 0}
    excluded = sorted(set(means) - set(usable))
    if excluded:
        logger.info(f"Geofactor: vantages sem dados excluídos: {', '.join(excluded)}")
    if len(usable) < 2:
        raise InsufficientVantagesError(f"Geofactor exige >= 2 vantages com dados, encontrados {len(usable)}")
    values = list(usable.values())
    return GeofactorResult(value=max(values) / min(values), vantages=sorted(usable), excluded=excluded)


def resample_daily(series: Series) -> dict[str, float]:
    """Latência média por dia UTC (registros bem-sucedidos); dias sem registros ficam ausentes"""
    records = series.successable
    if not records:
        return {}
    frame = pd.DataFrame(
        {
            "timestamp": pd.to_datetime([r.timestamp_ms for r in records], unit="ms", utc=True),
            "latency_ms": [r.latency_ms for r in records],
        }
    )
    daily = frame.groupby(frame["timestamp"].dt.strftime("%Y-%m-%d"))["latency_ms"].mean()
    return {day: float(value) for day, value in daily.sort_index().items()}
