"""
Modelo Pydantic para os endpoints monitorados
"""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator

from config.constants import DEFAULT_HTTP_PORT, DEFAULT_HTTPS_PORT


class Protocol(str, Enum):
    ICMP = "ICMP"
    HTTP = "HTTP"
    HTTPS = "HTTPS"


class EndpointSpec(BaseModel):
    """
    Alvo de benchmark: recurso público acessado via GET
    """

    model_config = ConfigDict(frozen=True)

    id: str = Field(..., min_length=1, description="Rótulo curto e único do endpoint")
    url: str = Field(..., description="URL absoluta sem esquema, ex: api.example.com/v1/items")
    protocols: frozenset[Protocol] = Field(..., description="Protocolos medidos: ICMP, HTTP e/ou HTTPS")
    expected_method: str = Field(default="GET", description="Método HTTP (somente GET na v1)")
    http_port: int = Field(default=DEFAULT_HTTP_PORT, ge=1, le=65535)
    https_port: int = Field(default=DEFAULT_HTTPS_PORT, ge=1, le=65535)
    echo_port: int | None = Field(default=None, ge=1, le=65535, description="Porta do eco UDP (backend sem ICMP)")

    @field_validator("id")
    @classmethod
    def validate_id(cls, v: str) -> str:
        v = v.strip()
        if not v or "|" in v or "/" in v:
            raise ValueError("id não pode ser vazio nem conter '|' ou '/'")
        return v

    @field_validator("url")
    @classmethod
    def validate_url(cls, v: str) -> str:
        v = v.strip()
        if "://" in v:
            raise ValueError(f"URL não deve conter esquema: {v}")
        host = v.split("/", 1)[0]
        if not host or any(ch.isspace() for ch in host):
            raise ValueError(f"URL sem host válido: {v}")
        return v

    @field_validator("protocols")
    @classmethod
    def validate_protocols(cls, v: frozenset[Protocol]) -> frozenset[Protocol]:
        if not v:
            raise ValueError("protocols não pode ser vazio")
        return v

    @field_validator("expected_method")
    @classmethod
    def validate_method(cls, v: str) -> str:
        if v.upper() != "GET":
            raise ValueError("Somente GET é suportado")
        return "GET"

    @property
    def host(self) -> str:
        return self.url.split("/", 1)[0]

    @property
    def path(self) -> str:
        parts = self.url.split("/", 1)
        return "/" + parts[1] if len(parts) > 1 else "/"

    def url_for(self, protocol: Protocol) -> str:
        """Monta a URL completa para HTTP ou HTTPS"""
        if protocol == Protocol.HTTP:
            port = "" if self.http_port == DEFAULT_HTTP_PORT else f":{self.http_port}"
            return f"http://{self.host}{port}{self.path}"
        if protocol == Protocol.HTTPS:
            port = "" if self.https_port == DEFAULT_HTTPS_PORT else f":{self.https_port}"
            return f"https://{self.host}{port}{self.path}"
        raise ValueError(f"Protocolo sem URL: {protocol}")
