"""
Evolução dos scores de segurança: mudanças duradouras, censo de suites e defasagem entre vantages
"""

import logging
from collections import defaultdict
from collections.abc import Iterable, Sequence
from itertools import combinations

import numpy as np

from config.constants import DEFAULT_LASTING_MIN_REL_CHANGE, DEFAULT_LASTING_PERSISTENCE
from models.cipher import ScanLogEntry
from models.errors import UnknownSuiteError
from models.report import ChangeEvent, LagEntry, SuiteCensus
from tlsscan.classification import SuiteTable, load_suite_table

logger = logging.getLogger("apiq")

EPSILON = 1e-12


def _within(value: float, reference: float, min_rel_change: float) -> bool:
    if reference == 0:
        return value == 0
    return abs(value - reference) / abs(reference) < min_rel_change - EPSILON


def lasting_changes(
    scores: Sequence[tuple[int, float]],
    min_rel_change: float = DEFAULT_LASTING_MIN_REL_CHANGE,
    persistence: int = DEFAULT_LASTING_PERSISTENCE,
) -> list[ChangeEvent]:
    """
    Pontos onde o score muda ao menos min_rel_change (relativo ao anterior) e as `persistence`
    medições seguintes ficam dentro de min_rel_change do novo valor.
    O novo score também precisa sair do patamar vigente: o último score alcançado por um passo menor
    que min_rel_change ou por uma mudança duradoura. Deriva gradual move o patamar; o retorno de um
    pico isolado ao patamar não é evento.
    Base 0: mudança para qualquer valor != 0 é evento, marcado como flagged_zero_base.
    """
    if persistence < 1:
        raise ValueError("persistence deve ser >= 1")
    ordered = sorted(scores, key=lambda item: item[0])
    if len(ordered) <= persistence:
        return []

    events = []
    level = ordered[0][1]
    for i in range(1, len(ordered) - persistence):
        old, new = ordered[i - 1][1], ordered[i][1]
        if old == 0:
            if new == 0:
                level = new
                continue
            relative, flagged = None, True
        else:
            relative = (new - old) / abs(old)
            if abs(relative) < min_rel_change - EPSILON:
                level = new
                continue
            flagged = False
        if _within(new, level, min_rel_change):
            continue
        following = ordered[i + 1 : i + 1 + persistence]
        if all(_within(score, new, min_rel_change) for _, score in following):
            events.append(
                ChangeEvent(
                    timestamp_ms=ordered[i][0],
                    old_score=old,
                    new_score=new,
                    relative_change=relative,
                    flagged_zero_base=flagged,
                )
            )
            level = new
    return events


def score_series(entries: Iterable[ScanLogEntry]) -> dict[tuple[str, str], list[tuple[int, float]]]:
    """(endpoint, vantage) -> [(timestamp, score)] em ordem temporal"""
    grouped: dict[tuple[str, str], list[tuple[int, float]]] = defaultdict(list)
    for entry in entries:
        grouped[(entry.endpoint_id, entry.vantage)].append((entry.timestamp_ms, entry.server_score))
    return {key: sorted(values) for key, values in sorted(grouped.items())}


def mean_scores(entries: Iterable[ScanLogEntry]) -> dict[tuple[str, str], float]:
    return {key: float(np.mean([score for _, score in values])) for key, values in score_series(entries).items()}


def mean_score_per_endpoint(entries: Iterable[ScanLogEntry]) -> dict[str, float]:
    per_endpoint: dict[str, list[float]] = defaultdict(list)
    for entry in entries:
        per_endpoint[entry.endpoint_id].append(entry.server_score)
    return {endpoint_id: float(np.mean(values)) for endpoint_id, values in sorted(per_endpoint.items())}


def cross_vantage_lag(
    entries: Iterable[ScanLogEntry],
    min_rel_change: float = DEFAULT_LASTING_MIN_REL_CHANGE,
    persistence: int = DEFAULT_LASTING_PERSISTENCE,
) -> list[LagEntry]:
    """
    Casa mudanças duradouras do mesmo endpoint em vantages diferentes (mesma direção,
    novo score equivalente) e mede quanto tempo a segunda demorou a aparecer.
    """
    events: dict[str, dict[str, list[ChangeEvent]]] = defaultdict(dict)
    for (endpoint_id, vantage), values in score_series(entries).items():
        events[endpoint_id][vantage] = lasting_changes(values, min_rel_change, persistence)

    lags: list[LagEntry] = []
    for endpoint_id, by_vantage in sorted(events.items()):
        for vantage_a, vantage_b in combinations(sorted(by_vantage), 2):
            used: set[int] = set()
            for event_a in by_vantage[vantage_a]:
                direction = np.sign(event_a.new_score - event_a.old_score)
                for index, event_b in enumerate(by_vantage[vantage_b]):
                    if index in used or np.sign(event_b.new_score - event_b.old_score) != direction:
                        continue
                    if not _within(event_b.new_score, event_a.new_score, min_rel_change):
                        continue
                    used.add(index)
                    a_first = event_a.timestamp_ms <= event_b.timestamp_ms
                    first, second = (vantage_a, vantage_b) if a_first else (vantage_b, vantage_a)
                    lags.append(
                        LagEntry(
                            endpoint_id=endpoint_id,
                            vantage_first=first,
                            vantage_second=second,
                            first_change_ms=min(event_a.timestamp_ms, event_b.timestamp_ms),
                            lag_s=abs(event_b.timestamp_ms - event_a.timestamp_ms) / 1000.0,
                        )
                    )
                    break
    return lags


def suite_census(
    entries_a: Iterable[ScanLogEntry], entries_b: Iterable[ScanLogEntry], table: SuiteTable | None = None
) -> SuiteCensus:
    """
    Suites exclusivas de cada execução e ocorrências (scan, suite) com score base -1.
    Suites fora da tabela são listadas em `unclassified` e não contam como fracas.
    """
    table = table or load_suite_table()
    entries_a, entries_b = list(entries_a), list(entries_b)
    names_a = {name for entry in entries_a for name in entry.suite_names}
    names_b = {name for entry in entries_b for name in entry.suite_names}
    unclassified: set[str] = set()

    def weak_occurrences(entries: list[ScanLogEntry]) -> int:
        count = 0
        for entry in entries:
            for name in entry.suite_names:
                try:
                    if table.classify(name).base_score == -1:
                        count += 1
                except UnknownSuiteError:
                    unclassified.add(name)
        return count

    census = SuiteCensus(
        only_in_a=sorted(names_a - names_b),
        only_in_b=sorted(names_b - names_a),
        weak_occurrences_a=weak_occurrences(entries_a),
        weak_occurrences_b=weak_occurrences(entries_b),
    )
    census.unclassified = sorted(unclassified)
    if unclassified:
        logger.warning(f"⚠️ Suites fora da tabela de classificação: {', '.join(census.unclassified)}")
    return census
