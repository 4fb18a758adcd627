import logging
import logging.handlers
from pathlib import Path

from pythonjsonlogger import jsonlogger

LOG_FILE = Path("apiq.log")
MAX_BYTES = 10 * 1024 * 1024
BACKUP_COUNT = 5


class SeriesFormatter(logging.Formatter):
    def format(self, record):
        if not hasattr(record, "series"):
            record.series = "system"
        return super().format(record)


class SeriesJsonFormatter(jsonlogger.JsonFormatter):
    def add_fields(self, log_record, record, message_dict):
        super().add_fields(log_record, record, message_dict)
        log_record.setdefault("series", getattr(record, "series", "system"))


def setup_logging(level: int = logging.INFO, log_file: Path | None = LOG_FILE) -> logging.Logger:
    logger = logging.getLogger("apiq")
    logger.setLevel(level)

    if logger.handlers:
        return logger

    if log_file is not None:
        file_handler = logging.handlers.RotatingFileHandler(
            log_file, maxBytes=MAX_BYTES, backupCount=BACKUP_COUNT, encoding="utf-8"
        )
        file_handler.setLevel(level)
        file_handler.setFormatter(SeriesJsonFormatter("%(asctime)s %(name)s %(levelname)s %(message)s"))
        logger.addHandler(file_handler)

    console_handler = logging.StreamHandler()
    console_handler.setLevel(level)
    console_formatter = SeriesFormatter("%(asctime)s - %(levelname)s - [%(series)s] - %(message)s", datefmt="%H:%M:%S")
    console_handler.setFormatter(console_formatter)
    logger.addHandler(console_handler)

    return logger


class SeriesAdapter(logging.LoggerAdapter):
    def process(self, msg, kwargs):
        series = self.extra.get("series", "system")
        kwargs["extra"] = {"series": series}
        return msg, kwargs
