"""
Agendamento fixed-rate por série com fase própria e supervisor de workers.

Cada série dispara em t = fase + k * intervalo (grade do relógio de parede),
com prazos absolutos: a duração da medição não desloca os disparos seguintes.
"""

import asyncio
import hashlib
import logging
import time
from collections.abc import Awaitable, Callable, Hashable, Iterable

from config.constants import HEARTBEAT_GRACE_FACTOR, SUPERVISOR_TICK_S
from config.logging_config import SeriesAdapter
from models.errors import ConfigurationError

logger = logging.getLogger("apiq")


def series_phase_ms(endpoint_id: str, protocol: str, interval_s: int) -> int:
    """fase = hash(endpoint_id + protocolo) mod intervalo"""
    digest = hashlib.sha256(f"{endpoint_id}{protocol}".encode()).digest()
    return int.from_bytes(digest[:8], "big") % (interval_s * 1000)


def assign_phases(keys: Iterable[tuple[str, str]], interval_s: int, stagger: bool = True) -> dict[tuple[str, str], int]:
    """
    Fases distintas dentro de um intervalo; colisões avançam 1 ms.
    Com stagger desligado todas as séries começam na fase 0.
    """
    interval_ms = interval_s * 1000
    keys = list(keys)
    if not stagger:
        return {key: 0 for key in keys}
    if len(keys) > interval_ms:
        raise ConfigurationError(f"{len(keys)} séries não cabem em fases distintas de {interval_s}s")

    phases: dict[tuple[str, str], int] = {}
    used: set[int] = set()
    for endpoint_id, protocol in keys:
        phase = series_phase_ms(endpoint_id, str(protocol), interval_s)
        while phase in used:
            phase = (phase + 1) % interval_ms
        used.add(phase)
        phases[(endpoint_id, protocol)] = phase
    return phases


def next_fire_ms(now_ms: int, interval_ms: int, phase_ms: int) -> int:
    """Menor t >= now_ms com t ≡ fase (mod intervalo)"""
    offset = (now_ms - phase_ms) % interval_ms
    return now_ms if offset == 0 else now_ms + (interval_ms - offset)


class PeriodicWorker:
    """
    Executa `action` a cada intervalo, em prazos absolutos.
    Ticks perdidos (ação mais longa que o intervalo) são pulados, nunca disparados em rajada.
    """

    def __init__(
        self,
        name: str,
        interval_s: float,
        phase_ms: int,
        action: Callable[[], Awaitable[None]],
        action_budget_s: float = 0.0,
        wall_clock: Callable[[], float] = time.time,
    ):
        self.name = name
        self.interval_s = interval_s
        self.phase_ms = phase_ms
        self.action = action
        self.grace_s = HEARTBEAT_GRACE_FACTOR * interval_s + action_budget_s
        self.wall_clock = wall_clock
        self.last_beat = time.monotonic()
        self.fired = 0
        self.skipped = 0
        self.log = SeriesAdapter(logger, {"series": name})
        self.stopping = asyncio.Event()

    def beat(self) -> None:
        self.last_beat = time.monotonic()

    def is_wedged(self, now_mono: float | None = None) -> bool:
        now_mono = time.monotonic() if now_mono is None else now_mono
        return now_mono - self.last_beat > self.grace_s

    def _first_deadline(self) -> float:
        """Converte o primeiro disparo da grade de parede para o relógio monotônico"""
        interval_ms = int(self.interval_s * 1000)
        wall_ms = int(self.wall_clock() * 1000)
        first = next_fire_ms(wall_ms, interval_ms, self.phase_ms)
        return time.monotonic() + (first - wall_ms) / 1000.0

    async def run(self) -> None:
        self.beat()
        deadline = self._first_deadline()
        while True:
            delay = deadline - time.monotonic()
            if delay > 0:
                try:
                    await asyncio.wait_for(self.stopping.wait(), timeout=delay)
                except asyncio.TimeoutError:
                    pass
            if self.stopping.is_set():
                return
            self.beat()
            await self.action()
            self.fired += 1
            self.beat()

            deadline += self.interval_s
            now = time.monotonic()
            if deadline <= now:
                missed = int((now - deadline) // self.interval_s) + 1
                deadline += missed * self.interval_s
                self.skipped += missed
                self.log.warning(f"⚠️ {missed} disparo(s) perdidos; próxima medição em {deadline - now:.1f}s")


class Supervisor:
    """
    Mantém um task por worker; reinicia workers mortos ou sem heartbeat.
    O reinício deixa uma lacuna no log, nunca registros sintéticos.
    ConfigurationError (ex.: sem privilégio ICMP) aborta a execução.
    """

    def __init__(self, tick_s: float = SUPERVISOR_TICK_S, on_restart: Callable[[str, str], None] | None = None):
        self.tick_s = tick_s
        self.on_restart = on_restart
        self.workers: dict[Hashable, PeriodicWorker] = {}
        self.tasks: dict[Hashable, asyncio.Task] = {}
        self.restarts: dict[Hashable, int] = {}
        self.paused = False

    def add(self, key: Hashable, worker: PeriodicWorker) -> None:
        self.workers[key] = worker
        self.restarts.setdefault(key, 0)

    def _start(self, key: Hashable) -> None:
        worker = self.workers[key]
        self.tasks[key] = asyncio.create_task(worker.run(), name=f"worker:{worker.name}")

    def _restart(self, key: Hashable, reason: str) -> None:
        worker = self.workers[key]
        task = self.tasks.get(key)
        if task and not task.done():
            task.cancel()
        self.restarts[key] += 1
        worker.log.warning(f"⚠️ Worker reiniciado ({reason})")
        if self.on_restart:
            self.on_restart(worker.name, reason)
        self._start(key)

    def check(self) -> None:
        """Uma passada de supervisão"""
        now = time.monotonic()
        for key, worker in self.workers.items():
            if worker.stopping.is_set():
                continue
            task = self.tasks.get(key)
            if task is None:
                self._start(key)
                continue
            if task.done():
                error = None if task.cancelled() else task.exception()
                if isinstance(error, ConfigurationError):
                    raise error
                self._restart(key, f"worker terminou: {type(error).__name__ if error else 'cancelado'}")
            elif worker.is_wedged(now):
                self._restart(key, f"sem heartbeat há {now - worker.last_beat:.1f}s")

    async def run(self) -> None:
        for key in self.workers:
            if key not in self.tasks:
                self._start(key)
        try:
            while True:
                await asyncio.sleep(self.tick_s)
                if not self.paused:
                    self.check()
        finally:
            await self.stop()

    async def stop(self, grace_s: float = 0.0) -> None:
        """Pede parada aos workers; medições em andamento têm até grace_s para terminar"""
        for worker in self.workers.values():
            worker.stopping.set()
        tasks = [task for task in self.tasks.values() if not task.done()]
        if tasks and grace_s > 0:
            _, tasks = await asyncio.wait(tasks, timeout=grace_s)
        for task in tasks:
            task.cancel()
        if tasks:
            await asyncio.gather(*tasks, return_exceptions=True)
