"""JSON logging for pipeline runs.

Every command run sets a correlation id; each record then carries it together
with the pipeline stage that emitted it, so one run can be pulled out of a
shared log stream.
"""

import contextvars
import json
import logging
from datetime import UTC, datetime
from typing import Any

# Set per CLI command; copied into fold worker threads by asyncio.to_thread
correlation_id_var: contextvars.ContextVar[str | None] = contextvars.ContextVar(
    "correlation_id", default=None
)

# Record attributes promoted to top-level JSON keys; other context goes under "extra"
TOP_LEVEL_FIELDS = ("stage", "operation", "duration_ms")
HUMAN_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class StructuredFormatter(logging.Formatter):
    """One JSON object per record."""

    def format(self, record: logging.LogRecord) -> str:
        entry: dict[str, Any] = {
            "timestamp": datetime.now(UTC).replace(tzinfo=None).isoformat() + "Z",
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        correlation_id = correlation_id_var.get()
        if correlation_id:
            entry["correlation_id"] = correlation_id
        for name in TOP_LEVEL_FIELDS:
            value = getattr(record, name, None)
            if value is not None:
                entry[name] = value
        context = getattr(record, "context", None)
        if context:
            entry["extra"] = context
        if record.exc_info:
            entry["exc_info"] = self.formatException(record.exc_info)
        return json.dumps(entry, default=str)


class StructuredLogger:
    """Logger taking `stage`, `operation` and `duration_ms` plus free-form context.

        logger.info("Corpus loaded", stage="corpus", users=12, tweets=480)
    """

    def __init__(self, name: str):
        self.logger = logging.getLogger(name)

    def _log(
        self,
        level: int,
        message: str,
        *,
        stage: str | None = None,
        operation: str | None = None,
        duration_ms: float | None = None,
        exc_info: bool = False,
        **context: Any,
    ) -> None:
        if not self.logger.isEnabledFor(level):
            return
        fields = {
            "stage": stage,
            "operation": operation,
            "duration_ms": duration_ms,
            "context": context or None,
        }
        # stacklevel 3 attributes the record to the caller of info()/error()/...
        self.logger.log(level, message, exc_info=exc_info, extra=fields, stacklevel=3)

    def debug(self, message: str, **kwargs: Any) -> None:
        self._log(logging.DEBUG, message, **kwargs)

    def info(self, message: str, **kwargs: Any) -> None:
        self._log(logging.INFO, message, **kwargs)

    def warning(self, message: str, **kwargs: Any) -> None:
        self._log(logging.WARNING, message, **kwargs)

    def error(self, message: str, **kwargs: Any) -> None:
        self._log(logging.ERROR, message, **kwargs)


def configure_logging(
    log_level: str = "WARNING",
    structured: bool = True,
    log_file: str | None = None,
) -> None:
    """Route `ad_predict.*` records to stderr and optionally a file.

    Args:
        log_level: DEBUG, INFO, WARNING or ERROR
        structured: JSON lines when True, plain text otherwise
        log_file: extra destination, appended to
    """
    package_logger = logging.getLogger("ad_predict")
    package_logger.setLevel(log_level.upper())

    # A process may run several commands (tests do); never stack handlers
    for handler in package_logger.handlers:
        handler.close()
    package_logger.handlers.clear()

    formatter = StructuredFormatter() if structured else logging.Formatter(HUMAN_FORMAT)
    handlers: list[logging.Handler] = [logging.StreamHandler()]
    if log_file:
        handlers.append(logging.FileHandler(log_file, encoding="utf-8"))
    for handler in handlers:
        handler.setFormatter(formatter)
        package_logger.addHandler(handler)
