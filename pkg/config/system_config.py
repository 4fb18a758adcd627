import json
import logging
import os
from pathlib import Path
from typing import Any

import yaml
from dotenv import load_dotenv
from pydantic import ValidationError

from config.constants import ENV_HEALTH_PORT, ENV_LOG_DIR, ENV_VANTAGE
from models.errors import ConfigurationError
from models.run_config import RunConfig

logger = logging.getLogger("apiq")

_CONFIG_DIR = Path(__file__).parent
_DEFAULT_CONFIG_PATH = _CONFIG_DIR / "profiles" / "default.yaml"


def _validate_config(config: dict) -> RunConfig:
    """
    Valida a configuração bruta e produz um RunConfig.

    Raises:
        ConfigurationError: Se campos obrigatórios estiverem faltando ou inválidos.
    """
    if not isinstance(config, dict):
        raise ConfigurationError("A configuração deve ser um mapeamento chave-valor")

    endpoints = config.get("endpoints") or []
    if not isinstance(endpoints, list):
        raise ConfigurationError("'endpoints' deve ser uma lista")

    try:
        return RunConfig.model_validate({**config, "endpoints": endpoints})
    except ValidationError as e:
        problems = [f"{'.'.join(str(p) for p in err['loc']) or '<raiz>'}: {err['msg']}" for err in e.errors()]
        raise ConfigurationError("Configuração inválida:\n  " + "\n  ".join(problems))


def _apply_env_overrides(config: dict) -> dict:
    """Aplica APIQ_VANTAGE, APIQ_LOG_DIR e APIQ_HEALTH_PORT por cima do arquivo"""
    load_dotenv(Path.cwd() / ".env", override=False)
    result = dict(config)
    if os.getenv(ENV_VANTAGE):
        result["vantage"] = os.environ[ENV_VANTAGE]
    if os.getenv(ENV_LOG_DIR):
        result["log_dir"] = os.environ[ENV_LOG_DIR]
    if os.getenv(ENV_HEALTH_PORT):
        try:
            result["health_port"] = int(os.environ[ENV_HEALTH_PORT])
        except ValueError:
            raise ConfigurationError(f"{ENV_HEALTH_PORT} inválido: {os.environ[ENV_HEALTH_PORT]!r}")
    return result


def _resolve_path(config_path: str | Path | None) -> Path:
    if not config_path:
        return _DEFAULT_CONFIG_PATH

    config_file = Path(config_path)
    if not config_file.is_absolute():
        current_dir_file = Path.cwd() / config_file
        if current_dir_file.exists():
            return current_dir_file
        return _CONFIG_DIR.parent / config_file
    return config_file


def read_config_file(config_file: Path) -> dict[str, Any]:
    with open(config_file, encoding="utf-8") as f:
        config_path_str = str(config_file)
        if config_path_str.endswith((".yaml", ".yml")):
            config = yaml.safe_load(f)
        elif config_path_str.endswith(".json"):
            config = json.load(f)
        else:
            raise ConfigurationError(
                f"Formato de configuração não suportado: {config_path_str}. Use YAML (.yaml, .yml) ou JSON (.json)."
            )

    if config is None:
        raise ConfigurationError(f"Arquivo de configuração vazio ou inválido: {config_file}")
    return config


def load_configuration(config_path: str | Path | None = None, *, fallback: bool = True) -> RunConfig:
    """
    Carrega a configuração do runner a partir de arquivo YAML.

    Se config_path não for fornecido, usa config/profiles/default.yaml.
    Se o arquivo especificado não existir e fallback=True, usa default.yaml.

    Args:
        config_path: Caminho para o arquivo de configuração (YAML ou JSON)
        fallback: Permite cair no perfil padrão quando o arquivo não existe

    Returns:
        RunConfig validado, já com as variáveis de ambiente aplicadas

    Raises:
        FileNotFoundError: Se nem o arquivo especificado nem default.yaml existirem
        ConfigurationError: Se o formato for inválido ou campos estiverem inválidos
    """
    config_file = _resolve_path(config_path)
    original_config_file = config_file

    if not config_file.exists():
        if fallback and config_path and config_file != _DEFAULT_CONFIG_PATH:
            logger.warning(
                f"Arquivo de configuração não encontrado: {config_file}. Usando fallback: {_DEFAULT_CONFIG_PATH}"
            )
            config_file = _DEFAULT_CONFIG_PATH

        if not config_file.exists():
            raise FileNotFoundError(f"Arquivo de configuração não encontrado: {original_config_file}")

    raw = read_config_file(config_file)
    return _validate_config(_apply_env_overrides(raw))
