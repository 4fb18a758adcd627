"""
Razões de sucesso das estratégias de failover (troca de região ou de protocolo)
"""

import bisect
import logging
from collections import defaultdict
from collections.abc import Iterable

import numpy as np

from analysis.loader import select_series
from config.constants import DEFAULT_ALIGNMENT_WINDOW_S
from models.endpoint import Protocol
from models.errors import InsufficientVantagesError, NoDataError
from models.report import Series, SeriesKey, Strategy, StrategyOutcome

logger = logging.getLogger("apiq")

_COUNTERPART_PROTOCOL = {
    Strategy.HTTP_2_HTTPS: (Protocol.HTTP, Protocol.HTTPS),
    Strategy.HTTPS_2_HTTP: (Protocol.HTTPS, Protocol.HTTP),
}


class _Timeline:
    """Timestamps ordenados e sucesso por índice, para busca por janela"""

    def __init__(self, series: Series):
        self.stamps = [r.timestamp_ms for r in series.records]
        self.success = [r.outcome.is_successable for r in series.records]

    def window(self, timestamp_ms: int, window_ms: int) -> list[bool]:
        lo = bisect.bisect_left(self.stamps, timestamp_ms - window_ms)
        hi = bisect.bisect_right(self.stamps, timestamp_ms + window_ms)
        return self.success[lo:hi]


def _pairs(series: list[Series], strategy: Strategy) -> list[tuple[Series, list[Series]]]:
    """(série de origem, séries de contrapartida) conforme a estratégia"""
    by_key: dict[SeriesKey, Series] = {s.key: s for s in series}
    http_series = [s for s in series if s.key.protocol != Protocol.ICMP]

    if strategy == Strategy.REGION_CHANGE:
        vantages = {s.key.vantage for s in http_series}
        if len(vantages) < 2:
            raise InsufficientVantagesError(f"REGION_CHANGE exige >= 2 vantages, encontrados {len(vantages)}")
        return [
            (
                s,
                [
                    other
                    for other in http_series
                    if other.key.endpoint_id == s.key.endpoint_id
                    and other.key.protocol == s.key.protocol
                    and other.key.vantage != s.key.vantage
                ],
            )
            for s in http_series
        ]

    source, target = _COUNTERPART_PROTOCOL[strategy]
    pairs = []
    for s in http_series:
        if s.key.protocol != source:
            continue
        counterpart = by_key.get(SeriesKey(s.key.endpoint_id, target, s.key.vantage))
        if counterpart is not None:
            pairs.append((s, [counterpart]))
    if not pairs:
        raise NoDataError(f"{strategy.value} exige séries {source.value} e {target.value} do mesmo endpoint e vantage")
    return pairs


def failover_ratios(
    series: dict[SeriesKey, Series] | Iterable[Series],
    strategy: Strategy,
    alignment_window_s: int = DEFAULT_ALIGNMENT_WINDOW_S,
    exclude_endpoints: Iterable[str] = (),
) -> StrategyOutcome:
    """
    Para cada registro sem sucesso, a estratégia funciona se existir um registro bem-sucedido
    na contrapartida dentro de ±janela. Falhas sem nenhum registro na janela são "unalignable"
    e saem do denominador. Endpoints sem falhas alinhadas ficam fora de min/max/avg.
    """
    if alignment_window_s <= 0:
        raise ValueError("alignment_window_s deve ser > 0")
    strategy = Strategy(strategy)
    window_ms = alignment_window_s * 1000
    selected = select_series(series, exclude_endpoints)

    failures: dict[str, int] = defaultdict(int)
    successes: dict[str, int] = defaultdict(int)
    unalignable: dict[str, int] = defaultdict(int)
    endpoints: set[str] = set()

    for source, counterparts in _pairs(selected, strategy):
        endpoint_id = source.key.endpoint_id
        endpoints.add(endpoint_id)
        timelines = [_Timeline(c) for c in counterparts]
        for record in source.records:
            if record.outcome.is_successable:
                continue
            matches = [ok for timeline in timelines for ok in timeline.window(record.timestamp_ms, window_ms)]
            if not matches:
                unalignable[endpoint_id] += 1
                continue
            failures[endpoint_id] += 1
            if any(matches):
                successes[endpoint_id] += 1

    ratios = {endpoint_id: successes[endpoint_id] / failures[endpoint_id] for endpoint_id in sorted(failures)}
    excluded = sorted(endpoints - set(ratios))
    if excluded:
        logger.info(f"{strategy.value}: endpoints sem falhas alinhadas (razão indefinida): {', '.join(excluded)}")

    values = list(ratios.values())
    return StrategyOutcome(
        strategy=strategy,
        success_ratio=ratios,
        failures=dict(sorted(failures.items())),
        unalignable=dict(sorted(unalignable.items())),
        excluded=excluded,
        min=min(values) if values else None,
        max=max(values) if values else None,
        avg=float(np.mean(values)) if values else None,
    )
