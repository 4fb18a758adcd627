"""
Gramática do arquivo de plano de falhas

    # comentário
    @seed 42
    @tls_preference ECDHE-RSA-AES256-SHA384,ECDHE-ECDSA-AES128-SHA,RC4-SHA
    0,60,OK(200,1024,10)
    60,60,STATUS(503)
    120,30,TIMEOUT
    150,30,RESET
    180,30,DROP_TLS
    210,60,PACKET_LOSS(0.4)

Uma janela por linha: `start_offset_s,duration_s,BEHAVIOR(args)`. OK aceita de zero a três
argumentos (status, body_bytes, delay_ms); os ausentes usam os padrões.
"""

import logging
import re
from pathlib import Path

from pydantic import ValidationError

from models.errors import FaultPlanError
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

logger = logging.getLogger("apiq")

_WINDOW_RE = re.compile(r"^\s*([0-9.]+)\s*,\s*([0-9.]+)\s*,\s*([A-Z_]+)\s*(?:\(([^)]*)\))?\s*$")
_OK_FIELDS = ("status", "body_bytes", "delay_ms")


def _args(raw: str | None) -> list[str]:
    if raw is None or not raw.strip():
        return []
    return [part.strip() for part in raw.split(",")]


def parse_behavior(name: str, raw_args: str | None) -> BehaviorType:
    """
    Raises:
        FaultPlanError: comportamento desconhecido ou argumentos inválidos
    """
    args = _args(raw_args)
    try:
        if name == "OK":
            if len(args) > len(_OK_FIELDS):
                raise FaultPlanError(f"OK aceita no máximo 3 argumentos, recebeu {len(args)}")
            return OkBehavior(**{field: int(value) for field, value in zip(_OK_FIELDS, args, strict=False)})
        if name == "STATUS":
            if len(args) != 1:
                raise FaultPlanError("STATUS exige exatamente 1 argumento (código)")
            return StatusBehavior(code=int(args[0]))
        if name == "PACKET_LOSS":
            if len(args) != 1:
                raise FaultPlanError("PACKET_LOSS exige exatamente 1 argumento (fração)")
            return PacketLossBehavior(fraction=float(args[0]))
        simple = {"TIMEOUT": TimeoutBehavior, "RESET": ResetBehavior, "DROP_TLS": DropTlsBehavior}
        if name in simple:
            if args:
                raise FaultPlanError(f"{name} não aceita argumentos")
            return simple[name]()
    except FaultPlanError:
        raise
    except (ValueError, ValidationError) as e:
        raise FaultPlanError(f"Argumentos inválidos para {name}: {str(e)}") from e
    raise FaultPlanError(f"Comportamento desconhecido: {name}")


def parse_plan(text: str) -> FaultPlan:
    """
    Interpreta o texto de um plano de falhas.

    Raises:
        FaultPlanError: linha fora da gramática, janelas sobrepostas ou diretiva inválida
    """
    windows: list[FaultWindow] = []
    seed: int | None = None
    preference: tuple[str, ...] | None = None

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("@"):
                directive, _, value = line[1:].partition(" ")
                value = value.strip()
                if directive == "seed":
                    seed = int(value)
                elif directive == "tls_preference":
                    preference = tuple(name.strip() for name in value.split(",") if name.strip())
                else:
                    raise FaultPlanError(f"Diretiva desconhecida: @{directive}")
                continue

            match = _WINDOW_RE.match(line)
            if match is None:
                raise FaultPlanError(f"Linha fora da gramática: {line!r}")
            start, duration, name, raw_args = match.groups()
            windows.append(
                FaultWindow(
                    start_offset_s=float(start),
                    duration_s=float(duration),
                    behavior=parse_behavior(name, raw_args),
                )
            )
        except (ValueError, ValidationError) as e:
            raise FaultPlanError(f"linha {number}: {str(e)}") from e

    try:
        plan = FaultPlan(windows=tuple(windows), tls_preference=preference, seed=seed)
    except ValidationError as e:
        raise FaultPlanError(str(e)) from e
    logger.debug(f"Plano carregado: {len(plan.windows)} janelas, seed={plan.seed}")
    return plan


def load_plan(path: str | Path) -> FaultPlan:
    """
    Raises:
        FileNotFoundError: arquivo inexistente
        FaultPlanError: conteúdo inválido
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Plano de falhas não encontrado: {path}")
    return parse_plan(path.read_text(encoding="utf-8"))


def _number(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def render_plan(plan: FaultPlan) -> str:
    """Texto equivalente ao plano, aceito por parse_plan"""
    lines = []
    if plan.seed is not None:
        lines.append(f"@seed {plan.seed}")
    if plan.tls_preference:
        lines.append(f"@tls_preference {','.join(plan.tls_preference)}")
    for window in plan.windows:
        lines.append(f"{_number(window.start_offset_s)},{_number(window.duration_s)},{window.behavior.render()}")
    return "\n".join(lines) + "\n"
