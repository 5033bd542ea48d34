"""
Logging for the dpk command line and its worker processes.

Log output goes to stderr (stdout carries reports, often JSON) and optionally
to a rotating file per service. Long computations report through
``log_timing`` so every step logs the same ``key=value`` context.
"""

import logging
import logging.handlers
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, Optional, Union

from src.config.settings import LoggingSettings, get_settings

LevelLike = Union[int, str, None]

_SHORT_FORMAT = "%(asctime)s | %(levelname)-8s | %(service)s | %(name)s | %(message)s"
_LONG_FORMAT = (
    "%(asctime)s | %(levelname)-8s | %(service)s | %(processName)s | %(name)s | "
    "%(funcName)s:%(lineno)d | %(message)s"
)


class _ServiceNameFilter(logging.Filter):
    """Stamp records with the service (cli, worker) unless one is already set."""

    def __init__(self, service_name: str):
        super().__init__()
        self.service_name = service_name

    def filter(self, record: logging.LogRecord) -> bool:
        if not hasattr(record, "service"):
            record.service = self.service_name
        return True


def _resolve_log_level(level: LevelLike, default_level_name: str) -> int:
    """Accept ``--loglevel`` names in any case, numeric levels, or fall back to the default."""
    fallback = getattr(logging, default_level_name.upper(), logging.INFO)
    if isinstance(level, int):
        return level
    if isinstance(level, str):
        resolved = getattr(logging, level.strip().upper(), None)
        return resolved if isinstance(resolved, int) else fallback
    return fallback


def _build_formatter(environment: str) -> logging.Formatter:
    # Worker processes only show up in the long format.
    if environment == "development":
        return logging.Formatter(_SHORT_FORMAT, datefmt="%H:%M:%S")
    return logging.Formatter(_LONG_FORMAT, datefmt="%Y-%m-%d %H:%M:%S")


def _clear_handlers(logger: logging.Logger) -> None:
    for handler in list(logger.handlers):
        handler.close()
    logger.handlers.clear()
    logger.filters.clear()


def _attach(logger: logging.Logger, handler: logging.Handler, level: int, formatter: logging.Formatter, service: str) -> None:
    handler.setLevel(level)
    handler.setFormatter(formatter)
    handler.addFilter(_ServiceNameFilter(service))
    logger.addHandler(handler)


def setup_logging(
    settings: Optional[LoggingSettings] = None,
    *,
    service_name: str = "cli",
    log_level: LevelLike = None,
) -> LoggingSettings:
    """
    Configure the root logger. Calling it again replaces the previous handlers.

    Args:
        settings: Logging settings; defaults to ``get_settings().logging``.
        service_name: ``cli`` for the command line, ``worker`` for pool processes.
        log_level: Override of ``LOG_LEVEL`` (``--loglevel``).

    Returns:
        The logging settings that were applied.
    """
    settings = settings or get_settings().logging
    level = _resolve_log_level(log_level, settings.LOG_LEVEL)
    formatter = _build_formatter(get_settings().app.ENVIRONMENT)

    root = logging.getLogger()
    _clear_handlers(root)
    root.setLevel(level)

    if settings.LOG_CONSOLE_ENABLED:
        _attach(root, logging.StreamHandler(sys.stderr), level, formatter, service_name)

    log_path: Optional[Path] = None
    if settings.LOG_FILE_ENABLED:
        log_path = Path(settings.get_service_log_path(service_name))
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.handlers.RotatingFileHandler(
            filename=log_path,
            maxBytes=settings.LOG_FILE_MAX_SIZE,
            backupCount=settings.LOG_FILE_BACKUP_COUNT,
            encoding="utf-8",
        )
        _attach(root, file_handler, level, formatter, service_name)

    if not root.handlers:
        # keeps logging.lastResort from echoing errors to stderr
        root.addHandler(logging.NullHandler())

    # warnings.warn output, numpy included, goes through the handlers
    logging.captureWarnings(True)
    logging.getLogger(__name__).debug(
        "Logging configured %s",
        format_log_context(service=service_name, level=logging.getLevelName(level), file=log_path),
    )
    return settings


def setup_worker_logging(level: int) -> None:
    """Pool initializer: worker processes log like the parent, under the ``worker`` service."""
    setup_logging(service_name="worker", log_level=level)


def format_log_context(**fields: Any) -> str:
    """Render ``key=value`` fragments in call order, skipping None and empty strings."""
    return " ".join(f"{key}={value}" for key, value in fields.items() if value is not None and value != "")


@contextmanager
def log_timing(logger: logging.Logger, message: str, *, level: int = logging.DEBUG, **fields: Any) -> Iterator[Dict[str, Any]]:
    """
    Log ``message`` with the given context and the elapsed seconds when the block ends.

    The yielded dict may be filled inside the block with results that are
    only known at the end (counts, verdicts). Nothing is logged if the block raises.
    """
    context: Dict[str, Any] = dict(fields)
    started = time.perf_counter()
    yield context
    context["seconds"] = round(time.perf_counter() - started, 3)
    logger.log(level, "%s %s", message, format_log_context(**context))


__all__ = [
    "setup_logging",
    "setup_worker_logging",
    "format_log_context",
    "log_timing",
    "LoggingSettings",
]
