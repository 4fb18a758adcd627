"""
Constantes do apiq - Valores padrão para configurações de medição e análise
"""

# === IDENTIFICAÇÃO ===
APP_NAME = "apiq"
APP_VERSION = "1.0.0"

# === AGENDAMENTO ===
DEFAULT_PROBE_INTERVAL_S = 300  # 5 minutos
DEFAULT_SCAN_INTERVAL_S = 43200  # 12 horas
DEFAULT_STAGGER = True
SUPERVISOR_TICK_S = 1.0
HEARTBEAT_GRACE_FACTOR = 2  # intervalos sem heartbeat antes de reiniciar o worker

# === PROBES ===
DEFAULT_PING_PACKETS = 5
DEFAULT_PING_PACKET_TIMEOUT_S = 1.0
DEFAULT_HTTP_TIMEOUT_MS = 60000  # 60 segundos
DEFAULT_HTTP_PORT = 80
DEFAULT_HTTPS_PORT = 443
SLOW_REQUEST_THRESHOLD_MS = 60000
NO_CACHE_HEADERS = {
    "Cache-Control": "no-cache, no-store",
    "Pragma": "no-cache",
    "Connection": "close",
}

# === TLS ===
DEFAULT_TLS_HANDSHAKE_TIMEOUT_S = 10.0
STRONG_CIPHER_BITS = 256
KEY_LENGTH_MODIFIER = 0.1

# === LOGS DE REGISTROS ===
RECORD_FIELD_SEPARATOR = "|"
SUITE_SEPARATOR = ";"
RECORD_LOG_SUFFIX = ".log"
SCAN_LOG_SUFFIX = ".scan.log"
QUARANTINE_SUFFIX = ".quarantine"
DEFAULT_LOG_WRITE_RETRIES = 5
LOG_WRITE_BACKOFF_MIN_S = 0.1
LOG_WRITE_BACKOFF_MAX_S = 5.0

# === HEALTH ===
DEFAULT_HEALTH_HOST = "0.0.0.0"
DEFAULT_HEALTH_PORT = 8088
STALENESS_FACTOR = 2  # série é considerada parada após 2x o intervalo

# === ANÁLISE ===
DEFAULT_GAP_THRESHOLD = 2.0
DEFAULT_ALIGNMENT_WINDOW_S = 150
DEFAULT_HISTOGRAM_BIN_MS = 50
DEFAULT_LASTING_MIN_REL_CHANGE = 0.01
DEFAULT_LASTING_PERSISTENCE = 10
MS_PER_DAY = 86_400_000

# === MOCKNET ===
DEFAULT_MOCK_STATUS = 200
DEFAULT_MOCK_BODY_BYTES = 1024
DEFAULT_MOCK_DELAY_MS = 10
RESET_PARTIAL_BODY_BYTES = 16
MOCK_TIMEOUT_HOLD_S = 3600

# === VARIÁVEIS DE AMBIENTE ===
ENV_VANTAGE = "APIQ_VANTAGE"
ENV_LOG_DIR = "APIQ_LOG_DIR"
ENV_HEALTH_PORT = "APIQ_HEALTH_PORT"

# === CÓDIGOS DE SAÍDA ===
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_BAD_INPUT = 2
