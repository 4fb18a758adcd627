"""
Leitura dos logs de registros e de scans, particionamento em séries e detecção de lacunas.

Lacunas são períodos sem dados (coletor parado), nunca indisponibilidade.
"""

import logging
from collections import defaultdict
from collections.abc import Iterable, Iterator
from pathlib import Path

from config.constants import DEFAULT_GAP_THRESHOLD, DEFAULT_PROBE_INTERVAL_S, RECORD_LOG_SUFFIX, SCAN_LOG_SUFFIX
from models.cipher import ScanLogEntry
from models.errors import MalformedRecordError
from models.probe_record import ProbeRecord
from models.report import LoadResult, Series, SeriesKey
from runner.record_log import decode_record, decode_scan

logger = logging.getLogger("apiq")


def expand_log_paths(paths: Iterable[str | Path]) -> tuple[list[Path], list[Path]]:
    """
    Separa arquivos de registros e de scans; diretórios são expandidos.

    Raises:
        FileNotFoundError: caminho inexistente
    """
    records: list[Path] = []
    scans: list[Path] = []
    for raw in paths:
        path = Path(raw)
        if not path.exists():
            raise FileNotFoundError(f"Log não encontrado: {path}")
        candidates = sorted(p for p in path.iterdir() if p.is_file()) if path.is_dir() else [path]
        for candidate in candidates:
            if candidate.name.endswith(SCAN_LOG_SUFFIX):
                scans.append(candidate)
            elif candidate.name.endswith(RECORD_LOG_SUFFIX):
                records.append(candidate)
            elif not path.is_dir():
                records.append(candidate)
    return records, scans


def _lines(paths: Iterable[Path]) -> Iterator[tuple[Path, int, str]]:
    for path in paths:
        with open(path, encoding="utf-8", errors="replace") as f:
            for number, line in enumerate(f, start=1):
                if line.strip():
                    yield path, number, line


def find_gaps(timestamps: list[int], expected_interval_s: int, gap_threshold: float) -> list[tuple[int, int]]:
    """Intervalos (anterior, próximo) cujo espaçamento excede gap_threshold * intervalo"""
    limit_ms = gap_threshold * expected_interval_s * 1000
    return [(a, b) for a, b in zip(timestamps, timestamps[1:], strict=False) if b - a > limit_ms]


def load_series(
    paths: Iterable[str | Path],
    expected_interval_s: int = DEFAULT_PROBE_INTERVAL_S,
    gap_threshold: float = DEFAULT_GAP_THRESHOLD,
) -> LoadResult:
    """
    Particiona registros por (endpoint, protocolo, vantage), ordena por timestamp e calcula lacunas.
    Linhas malformadas vão para quarentena (contagem), nunca abortam a leitura.
    """
    if gap_threshold <= 1:
        raise ValueError("gap_threshold deve ser > 1")
    if expected_interval_s < 1:
        raise ValueError("expected_interval_s deve ser >= 1")

    grouped: dict[SeriesKey, dict[int, ProbeRecord]] = defaultdict(dict)
    quarantined = 0
    duplicates = 0
    for path, number, line in _lines(Path(p) for p in paths):
        try:
            record = decode_record(line)
        except MalformedRecordError as e:
            quarantined += 1
            logger.debug(f"Linha {number} de {path.name} em quarentena: {str(e)}")
            continue
        key = SeriesKey(record.endpoint_id, record.protocol, record.vantage)
        if record.timestamp_ms in grouped[key]:
            duplicates += 1
            continue
        grouped[key][record.timestamp_ms] = record

    series: dict[SeriesKey, Series] = {}
    for key in sorted(grouped, key=lambda k: (k.endpoint_id, k.protocol.value, k.vantage)):
        by_time = grouped[key]
        stamps = sorted(by_time)
        series[key] = Series(
            key=key,
            records=tuple(by_time[t] for t in stamps),
            gaps=tuple(find_gaps(stamps, expected_interval_s, gap_threshold)),
            expected_interval_s=expected_interval_s,
        )

    if quarantined:
        logger.warning(f"⚠️ {quarantined} linha(s) malformada(s) em quarentena")
    if duplicates:
        logger.warning(f"⚠️ {duplicates} registro(s) duplicado(s) ignorado(s)")
    return LoadResult(series=series, quarantined=quarantined, duplicates=duplicates)


def load_scans(paths: Iterable[str | Path]) -> tuple[list[ScanLogEntry], int]:
    """Entradas do log de scans ordenadas por (endpoint, vantage, timestamp) e contagem de quarentena"""
    entries: list[ScanLogEntry] = []
    quarantined = 0
    for path, number, line in _lines(Path(p) for p in paths):
        try:
            entries.append(decode_scan(line))
        except MalformedRecordError as e:
            quarantined += 1
            logger.debug(f"Linha {number} de {path.name} em quarentena: {str(e)}")
    entries.sort(key=lambda e: (e.endpoint_id, e.vantage, e.timestamp_ms))
    return entries, quarantined


def select_series(
    series: dict[SeriesKey, Series] | Iterable[Series], exclude_endpoints: Iterable[str] = ()
) -> list[Series]:
    """Filtro de endpoints (ex.: recortes sem endpoints que saíram do ar)"""
    excluded = set(exclude_endpoints)
    values = series.values() if isinstance(series, dict) else series
    return [s for s in values if s.key.endpoint_id not in excluded]
