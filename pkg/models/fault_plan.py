"""
Plano declarativo de falhas do mocknet
"""

from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from config.constants import DEFAULT_MOCK_BODY_BYTES, DEFAULT_MOCK_DELAY_MS, DEFAULT_MOCK_STATUS


class OkBehavior(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["OK"] = "OK"
    status: int = Field(default=DEFAULT_MOCK_STATUS, ge=200, le=599)
    body_bytes: int = Field(default=DEFAULT_MOCK_BODY_BYTES, ge=0)
    delay_ms: int = Field(default=DEFAULT_MOCK_DELAY_MS, ge=0)

    def render(self) -> str:
        return f"OK({self.status},{self.body_bytes},{self.delay_ms})"


class StatusBehavior(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["STATUS"] = "STATUS"
    code: int = Field(..., ge=200, le=599)

    def render(self) -> str:
        return f"STATUS({self.code})"


class TimeoutBehavior(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["TIMEOUT"] = "TIMEOUT"

    def render(self) -> str:
        return "TIMEOUT"


class ResetBehavior(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["RESET"] = "RESET"

    def render(self) -> str:
        return "RESET"


class DropTlsBehavior(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["DROP_TLS"] = "DROP_TLS"

    def render(self) -> str:
        return "DROP_TLS"


class PacketLossBehavior(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["PACKET_LOSS"] = "PACKET_LOSS"
    fraction: float = Field(..., ge=0.0, le=1.0)

    def render(self) -> str:
        return f"PACKET_LOSS({self.fraction})"


BehaviorType = OkBehavior | StatusBehavior | TimeoutBehavior | ResetBehavior | DropTlsBehavior | PacketLossBehavior

Behavior = Annotated[BehaviorType, Field(discriminator="kind")]


DEFAULT_BEHAVIOR = OkBehavior()


class FaultWindow(BaseModel):
    model_config = ConfigDict(frozen=True)

    start_offset_s: float = Field(..., ge=0.0)
    duration_s: float = Field(..., gt=0.0)
    behavior: Behavior

    @property
    def end_offset_s(self) -> float:
        return self.start_offset_s + self.duration_s

    def contains(self, offset_s: float) -> bool:
        """Janela fechada-aberta [start, start + duration)"""
        return self.start_offset_s <= offset_s < self.end_offset_s


class FaultPlan(BaseModel):
    model_config = ConfigDict(frozen=True)

    windows: tuple[FaultWindow, ...] = ()
    tls_preference: tuple[str, ...] | None = None
    seed: int | None = None

    @model_validator(mode="after")
    def check_windows(self) -> "FaultPlan":
        for previous, current in zip(self.windows, self.windows[1:], strict=False):
            if current.start_offset_s < previous.end_offset_s:
                raise ValueError(
                    f"Janelas sobrepostas ou fora de ordem em {previous.start_offset_s}s e {current.start_offset_s}s"
                )
        if self.tls_preference is not None:
            if not self.tls_preference:
                raise ValueError("tls_preference não pode ser vazia")
            if len(set(self.tls_preference)) != len(self.tls_preference):
                raise ValueError("tls_preference contém duplicatas")
        return self

    @property
    def has_packet_loss(self) -> bool:
        return any(isinstance(window.behavior, PacketLossBehavior) for window in self.windows)

    @property
    def span_s(self) -> float:
        return self.windows[-1].end_offset_s if self.windows else 0.0

    def window_at(self, offset_s: float) -> tuple[int | None, BehaviorType]:
        """Retorna (índice da janela, comportamento); fora de qualquer janela vale o padrão OK"""
        for index, window in enumerate(self.windows):
            if window.contains(offset_s):
                return index, window.behavior
            if window.start_offset_s > offset_s:
                break
        return None, DEFAULT_BEHAVIOR
