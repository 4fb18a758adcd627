"""
Comparação entre duas execuções: p90, desvio padrão, scores e tamanho das respostas
"""

import logging
from collections import defaultdict
from collections.abc import Iterable

import numpy as np

from analysis.loader import select_series
from models.endpoint import Protocol
from models.report import KeyDelta, LatencyStats, RunComparison, Series, SeriesKey, SizeChange

logger = logging.getLogger("apiq")

FLAT_TOLERANCE = 1e-12


def relative_change(before: float, after: float) -> float | None:
    """(depois - antes) / |antes|; indefinida para base 0 (exceto 0 -> 0)"""
    if before == 0:
        return 0.0 if after == 0 else None
    return (after - before) / abs(before)


def compare_runs(
    stats_a: dict[SeriesKey, LatencyStats],
    stats_b: dict[SeriesKey, LatencyStats],
    scores_a: dict[str, float] | None = None,
    scores_b: dict[str, float] | None = None,
) -> RunComparison:
    """
    Variação relativa de p90 e desvio padrão por chave presente nas duas execuções.
    Chaves presentes em apenas uma execução vão para discontinued/new.
    p90 base 0 com p90 novo != 0: variação indefinida, contada em p90_undefined.
    """
    comparison = RunComparison()
    for key in sorted(set(stats_a) | set(stats_b), key=lambda k: (k.endpoint_id, k.protocol.value, k.vantage)):
        if key not in stats_b:
            comparison.discontinued.append(key.label())
            continue
        if key not in stats_a:
            comparison.new.append(key.label())
            continue
        a, b = stats_a[key], stats_b[key]
        p90_change = relative_change(a.p90, b.p90)
        comparison.deltas.append(
            KeyDelta(
                endpoint_id=key.endpoint_id,
                vantage=key.vantage,
                protocol=key.protocol,
                p90_a=a.p90,
                p90_b=b.p90,
                p90_rel_change=p90_change,
                stddev_rel_change=relative_change(a.stddev, b.stddev),
            )
        )
        if p90_change is None:
            comparison.p90_undefined += 1
        elif p90_change > FLAT_TOLERANCE:
            comparison.p90_increases += 1
        elif p90_change < -FLAT_TOLERANCE:
            comparison.p90_decreases += 1
        else:
            comparison.p90_flat += 1

    if scores_a and scores_b:
        for endpoint_id in sorted(set(scores_a) & set(scores_b)):
            change = relative_change(scores_a[endpoint_id], scores_b[endpoint_id])
            if change is not None:
                comparison.score_changes[endpoint_id] = change
        if comparison.score_changes:
            absolute = [abs(v) for v in comparison.score_changes.values()]
            comparison.median_abs_score_change = float(np.median(absolute))

    logger.info(
        f"Comparação: p90 aumentou em {comparison.p90_increases}, diminuiu em {comparison.p90_decreases}, "
        f"estável em {comparison.p90_flat}, indefinido em {comparison.p90_undefined}; "
        f"{len(comparison.discontinued)} descontinuadas, {len(comparison.new)} novas"
    )
    return comparison


def _mean_sizes(series: Iterable[Series]) -> dict[tuple[str, Protocol], float]:
    sizes: dict[tuple[str, Protocol], list[int]] = defaultdict(list)
    for s in series:
        if s.key.protocol == Protocol.ICMP:
            continue
        sizes[(s.key.endpoint_id, s.key.protocol)].extend(r.body_bytes for r in s.successable)
    return {key: float(np.mean(values)) for key, values in sizes.items() if values}


def size_changes(
    series_a: dict[SeriesKey, Series] | Iterable[Series],
    series_b: dict[SeriesKey, Series] | Iterable[Series],
    exclude_endpoints: Iterable[str] = (),
) -> list[SizeChange]:
    """Tamanho médio das respostas bem-sucedidas por endpoint/protocolo e variação entre execuções"""
    excluded = list(exclude_endpoints)
    sizes_a = _mean_sizes(select_series(series_a, excluded))
    sizes_b = _mean_sizes(select_series(series_b, excluded))
    return [
        SizeChange(
            endpoint_id=endpoint_id,
            protocol=protocol,
            mean_bytes_a=sizes_a[(endpoint_id, protocol)],
            mean_bytes_b=sizes_b[(endpoint_id, protocol)],
            rel_change=relative_change(sizes_a[(endpoint_id, protocol)], sizes_b[(endpoint_id, protocol)]),
        )
        for endpoint_id, protocol in sorted(set(sizes_a) & set(sizes_b), key=lambda k: (k[0], k[1].value))
    ]
