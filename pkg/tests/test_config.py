import json
import logging
from pathlib import Path

import pytest

from config.constants import ENV_HEALTH_PORT, ENV_LOG_DIR, ENV_VANTAGE
from config.logging_config import SeriesAdapter, setup_logging
from config.system_config import load_configuration
from models.endpoint import Protocol
from models.errors import ConfigurationError

logger = logging.getLogger("apiq")


@pytest.fixture(autouse=True)
def clean_env(monkeypatch, tmp_path):
    for name in (ENV_VANTAGE, ENV_LOG_DIR, ENV_HEALTH_PORT):
        monkeypatch.delenv(name, raising=False)
    # evita que um .env do diretório de trabalho vaze para os testes
    monkeypatch.chdir(tmp_path)


def test_load_yaml(config_file: Path, log_dir: Path):
    config = load_configuration(config_file)
    assert config.vantage == "test"
    assert (config.probe_interval_s, config.scan_interval_s, config.timeout_ms) == (60, 3600, 2000)
    assert config.log_dir == log_dir
    assert [(endpoint.id, protocol) for endpoint, protocol in config.series()] == [
        ("api1", Protocol.HTTP),
        ("api1", Protocol.HTTPS),
    ]


def test_load_json(tmp_path: Path):
    path = tmp_path / "apiq.json"
    path.write_text(json.dumps({"vantage": "us", "endpoints": [{"id": "a", "url": "example.com/x"}]}))
    config = load_configuration(path)
    assert config.vantage == "us"
    assert config.endpoints[0].id == "a"


def test_env_overrides(config_file: Path, monkeypatch, tmp_path: Path):
    monkeypatch.setenv(ENV_VANTAGE, "ap-south")
    monkeypatch.setenv(ENV_LOG_DIR, str(tmp_path / "elsewhere"))
    monkeypatch.setenv(ENV_HEALTH_PORT, "9099")
    config = load_configuration(config_file)
    assert config.vantage == "ap-south"
    assert config.log_dir == tmp_path / "elsewhere"
    assert config.health_port == 9099


def test_invalid_env_port(config_file: Path, monkeypatch):
    monkeypatch.setenv(ENV_HEALTH_PORT, "oito")
    with pytest.raises(ConfigurationError):
        load_configuration(config_file)


@pytest.mark.parametrize(
    "content",
    [
        "vantage: eu\nprobe_interval_s: 0\n",
        "vantage: eu\nprobe_interval_s: 600\nscan_interval_s: 300\n",
        "vantage: eu\nendpoints:\n  - {id: a, url: x.com/a}\n  - {id: a, url: y.com/b}\n",
        "vantage: eu\nendpoints: {id: a}\n",
        "vantage: 'eu|1'\n",
        "- apenas\n- uma lista\n",
    ],
)
def test_invalid_configuration(tmp_path: Path, content: str):
    path = tmp_path / "bad.yaml"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(ConfigurationError):
        load_configuration(path)


def test_unsupported_format_and_empty_file(tmp_path: Path):
    ini = tmp_path / "apiq.ini"
    ini.write_text("[apiq]\n")
    with pytest.raises(ConfigurationError):
        load_configuration(ini)
    empty = tmp_path / "empty.yaml"
    empty.write_text("")
    with pytest.raises(ConfigurationError):
        load_configuration(empty)


def test_missing_file(tmp_path: Path):
    with pytest.raises(FileNotFoundError):
        load_configuration(tmp_path / "nope.yaml", fallback=False)
    # com fallback cai no perfil padrão
    assert load_configuration(tmp_path / "nope.yaml").vantage == "local"


def test_default_profile():
    config = load_configuration()
    assert config.probe_interval_s == 300
    assert config.scan_interval_s == 43200
    assert config.ping_packets == 5
    assert config.timeout_ms == 60000
    assert config.endpoints == []


def test_json_log_lines(tmp_path: Path):
    """O handler de arquivo grava uma linha JSON por evento, com a série"""
    apiq_logger = logging.getLogger("apiq")
    saved = list(apiq_logger.handlers)
    apiq_logger.handlers.clear()
    log_file = tmp_path / "apiq.log"
    try:
        setup_logging(log_file=log_file)
        setup_logging(log_file=log_file)
        assert len(apiq_logger.handlers) == 2
        SeriesAdapter(apiq_logger, {"series": "api1/HTTPS"}).info("medição gravada")
        for handler in apiq_logger.handlers:
            handler.flush()
        (line,) = log_file.read_text(encoding="utf-8").splitlines()
        payload = json.loads(line)
        assert payload["message"] == "medição gravada"
        assert payload["series"] == "api1/HTTPS"
        assert payload["levelname"] == "INFO"
    finally:
        for handler in apiq_logger.handlers:
            handler.close()
        apiq_logger.handlers[:] = saved
    logger.info("✅ Configuração e logging conferem")
