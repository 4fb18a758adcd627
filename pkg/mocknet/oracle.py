"""
Oráculo: o que a análise de disponibilidade deve produzir para um plano e um calendário de medições
"""

import heapq
import logging
import random
from collections.abc import Sequence

from config.constants import DEFAULT_PING_PACKET_TIMEOUT_S, DEFAULT_PING_PACKETS
from mocknet.server import window_rng
from models.endpoint import Protocol
from models.errors import NonDeterministicPlanError
from models.fault_plan import (
    BehaviorType,
    DropTlsBehavior,
    FaultPlan,
    FaultWindow,
    OkBehavior,
    PacketLossBehavior,
    ResetBehavior,
    StatusBehavior,
    TimeoutBehavior,
)
from models.probe_record import FailureKind, ProbeOutcome
from models.report import AvailabilityReport
from probe.classifier import classify_outcome

logger = logging.getLogger("apiq")

_RANDOM_STATUSES = (200, 204, 301, 404, 429, 500, 503)


def probe_offsets(interval_s: float, phase_s: float, count: int, start_s: float = 0.0) -> list[float]:
    """Offsets (relativos à origem do mock) das `count` medições de uma série"""
    if interval_s <= 0:
        raise ValueError("interval_s deve ser > 0")
    if count < 0:
        raise ValueError("count deve ser >= 0")
    return [start_s + phase_s + k * interval_s for k in range(count)]


def expected_outcome(behavior: BehaviorType, protocol: Protocol) -> ProbeOutcome:
    """Resultado de uma medição HTTP(S) que chega durante `behavior`"""
    if protocol == Protocol.ICMP:
        raise ValueError("Use expected_report para ICMP (perdas dependem da sequência de pacotes)")
    if isinstance(behavior, OkBehavior):
        return classify_outcome(status_code=behavior.status)
    if isinstance(behavior, StatusBehavior):
        return classify_outcome(status_code=behavior.code)
    if isinstance(behavior, PacketLossBehavior):
        return classify_outcome(status_code=OkBehavior().status)
    if isinstance(behavior, DropTlsBehavior):
        kind = FailureKind.TLS if protocol == Protocol.HTTPS else FailureKind.DISCONNECT
        return classify_outcome(failure_kind=kind)
    if isinstance(behavior, TimeoutBehavior):
        return classify_outcome(failure_kind=FailureKind.TIMEOUT)
    if isinstance(behavior, ResetBehavior):
        return classify_outcome(failure_kind=FailureKind.DISCONNECT)
    raise ValueError(f"Comportamento desconhecido: {behavior!r}")


def _expected_icmp(
    plan: FaultPlan, offsets: Sequence[float], packets_per_probe: int, packet_timeout_s: float
) -> AvailabilityReport:
    """
    Simula a chegada de cada pacote ao mock: os pacotes de uma medição saem em sequência, o seguinte
    parte logo após a resposta (eco local, atraso nulo) ou após packet_timeout_s quando o anterior
    foi descartado. Cada pacote usa a janela e o RNG do instante em que chega, na ordem global de
    chegada, como o servidor.
    """
    rngs: dict[int, random.Random] = {}
    sent = len(offsets) * packets_per_probe
    lost = 0
    pending = [(offset, probe, 0) for probe, offset in enumerate(offsets)] if packets_per_probe else []
    heapq.heapify(pending)
    while pending:
        arrival, probe, seq = heapq.heappop(pending)
        index, behavior = plan.window_at(arrival)
        dropped = False
        if isinstance(behavior, PacketLossBehavior) and index is not None:
            rng = rngs.setdefault(index, window_rng(plan.seed, index))
            dropped = rng.random() < behavior.fraction
        lost += dropped
        if seq + 1 < packets_per_probe:
            heapq.heappush(pending, (arrival + (packet_timeout_s if dropped else 0.0), probe, seq + 1))
    return AvailabilityReport(
        pingability=(sent - lost) / sent,
        denominator={"records": len(offsets), "packets": sent},
        packets_sent=sent,
        packets_lost=lost,
    )


def _expected_http(plan: FaultPlan, protocol: Protocol, offsets: Sequence[float]) -> AvailabilityReport:
    outcomes = [expected_outcome(plan.window_at(offset)[1], protocol) for offset in offsets]
    total = len(outcomes)
    accessible = sum(1 for outcome in outcomes if outcome.is_accessible)
    successable = sum(1 for outcome in outcomes if outcome.is_successable)
    failures = [outcome for outcome in outcomes if not outcome.is_successable]

    distribution: dict[str, float] = {}
    if failures:
        buckets = {"4xx": 0, "5xx": 0, "None": 0}
        for outcome in failures:
            code = outcome.status_code
            bucket = "None" if code is None else ("4xx" if code < 500 else "5xx")
            buckets[bucket] += 1
        distribution = {bucket: count / len(failures) for bucket, count in buckets.items()}

    return AvailabilityReport(
        accessibility=accessible / total,
        successability=successable / total,
        denominator={"records": total, "accessible": accessible, "successable": successable, "failures": len(failures)},
        failure_distribution=distribution,
    )


def expected_report(
    plan: FaultPlan,
    protocol: Protocol,
    offsets: Sequence[float],
    packets_per_probe: int = DEFAULT_PING_PACKETS,
    packet_timeout_s: float = DEFAULT_PING_PACKET_TIMEOUT_S,
) -> AvailabilityReport:
    """
    Relatório exato que `analysis.availability` deve produzir sobre os registros das medições
    feitas nos `offsets` informados. Para ICMP, packet_timeout_s deve ser o do backend de eco.

    Raises:
        NonDeterministicPlanError: plano com PACKET_LOSS sem seed
    """
    if plan.has_packet_loss and plan.seed is None:
        raise NonDeterministicPlanError("Plano com PACKET_LOSS exige @seed para o oráculo")
    offsets = sorted(offsets)
    if not offsets:
        return AvailabilityReport.no_data()
    if protocol == Protocol.ICMP:
        return _expected_icmp(plan, offsets, packets_per_probe, packet_timeout_s)
    return _expected_http(plan, protocol, offsets)


def expected_reports_by_phase(
    plan: FaultPlan,
    protocol: Protocol,
    interval_s: float,
    count: int,
    packets_per_probe: int = DEFAULT_PING_PACKETS,
    packet_timeout_s: float = DEFAULT_PING_PACKET_TIMEOUT_S,
) -> dict[float, AvailabilityReport]:
    """
    Todos os relatórios possíveis conforme a fase da série.
    O relatório só muda quando uma medição cruza a borda de uma janela, então basta avaliar
    as fases que coincidem com bordas (mod intervalo). Em ICMP o pacote enviado após j descartes chega
    j * packet_timeout_s depois do início, então as bordas deslocadas desses múltiplos também contam.
    Retorna a primeira fase de cada relatório distinto.
    """
    boundaries = {0.0}
    shifts = [j * packet_timeout_s for j in range(packets_per_probe)] if protocol == Protocol.ICMP else [0.0]
    for window in plan.windows:
        for shift in shifts:
            boundaries.add((window.start_offset_s - shift) % interval_s)
            boundaries.add((window.end_offset_s - shift) % interval_s)

    reports: dict[float, AvailabilityReport] = {}
    seen: list[AvailabilityReport] = []
    for phase in sorted(boundaries):
        report = expected_report(
            plan, protocol, probe_offsets(interval_s, phase, count), packets_per_probe, packet_timeout_s
        )
        if report not in seen:
            seen.append(report)
            reports[phase] = report
    return reports


def _random_behavior(rng: random.Random, include: Sequence[str]) -> BehaviorType:
    kind = rng.choice(list(include))
    if kind == "OK":
        return OkBehavior(
            status=rng.choice(_RANDOM_STATUSES), body_bytes=rng.randrange(0, 4096), delay_ms=rng.randrange(0, 20)
        )
    if kind == "STATUS":
        return StatusBehavior(code=rng.choice(_RANDOM_STATUSES))
    if kind == "PACKET_LOSS":
        return PacketLossBehavior(fraction=round(rng.random(), 2))
    return {"TIMEOUT": TimeoutBehavior, "RESET": ResetBehavior, "DROP_TLS": DropTlsBehavior}[kind]()


def random_plan(
    seed: int,
    windows: int = 6,
    min_duration_s: int = 2,
    max_duration_s: int = 6,
    include: Sequence[str] = ("OK", "STATUS", "TIMEOUT", "RESET", "DROP_TLS", "PACKET_LOSS"),
    gaps: bool = False,
) -> FaultPlan:
    """
    Plano aleatório determinístico (mesma seed, mesmo plano), com bordas em segundos inteiros
    e o próprio seed do plano definido, apto para o oráculo.
    """
    if windows < 1 or min_duration_s < 1 or max_duration_s < min_duration_s:
        raise ValueError("Parâmetros de plano aleatório inválidos")
    rng = random.Random(seed)
    start = 0
    built = []
    for _ in range(windows):
        if gaps:
            start += rng.randrange(0, 3)
        duration = rng.randint(min_duration_s, max_duration_s)
        behavior = _random_behavior(rng, include)
        built.append(FaultWindow(start_offset_s=start, duration_s=duration, behavior=behavior))
        start += duration
    return FaultPlan(windows=tuple(built), seed=seed)
