"""Runtime logging helpers for hdtokens."""

from __future__ import annotations

import logging
import sys
import time
import traceback
from contextlib import contextmanager
from datetime import date
from pathlib import Path
from typing import Iterator, Optional

_INITIALIZED = False
_LOG_PATH: Optional[Path] = None

LOGGER_NAME = "hdtokens"


def _default_log_path(log_dir: Optional[str] = None) -> Path:
    from .shared_config import LOGS_DIR

    base = Path(log_dir or LOGS_DIR)
    base.mkdir(parents=True, exist_ok=True)
    return base / f"runtime-{date.today().isoformat()}.log"


def setup_runtime_monitor(app_name: str = LOGGER_NAME, log_dir: Optional[str] = None,
                          level: str = "INFO", to_file: bool = True) -> logging.Logger:
    """Initialize the package logger once per process."""
    global _INITIALIZED, _LOG_PATH
    logger = logging.getLogger(app_name)

    if _INITIALIZED:
        return logger

    logger.setLevel(getattr(logging, str(level).upper(), logging.INFO))
    logger.propagate = False

    if to_file:
        formatter = logging.Formatter(
            fmt="%(asctime)s | %(levelname)s | %(name)s | %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )
        _LOG_PATH = _default_log_path(log_dir)
        file_handler = logging.FileHandler(_LOG_PATH, encoding="utf-8")
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)
        logger.info("Runtime monitor initialized")
        logger.info("Log file: %s", _LOG_PATH)
    else:
        logger.addHandler(logging.NullHandler())

    _install_exception_hook(logger)
    _INITIALIZED = True
    return logger


def _install_exception_hook(logger: logging.Logger) -> None:
    def _print_to_terminal(exc_type, exc_value, exc_tb, *, prefix: str | None = None) -> None:
        stream = getattr(sys, "__stderr__", None) or sys.stderr
        if stream is None:
            return
        try:
            if prefix:
                print(prefix, file=stream)
            traceback.print_exception(exc_type, exc_value, exc_tb, file=stream)
            stream.flush()
        except Exception:
            pass

    def _sys_hook(exc_type, exc_value, exc_tb):
        if exc_type and issubclass(exc_type, KeyboardInterrupt):
            sys.__excepthook__(exc_type, exc_value, exc_tb)
            return
        logger.critical("Unhandled exception", exc_info=(exc_type, exc_value, exc_tb))
        _print_to_terminal(exc_type, exc_value, exc_tb, prefix="[hdtokens] Unhandled exception")

    sys.excepthook = _sys_hook


def monitor_action(action: str, *, logger: Optional[logging.Logger] = None) -> None:
    """Emit an action event."""
    (logger or logging.getLogger(LOGGER_NAME)).info("action: %s", action)


@contextmanager
def monitor_phase(name: str, *, logger: Optional[logging.Logger] = None) -> Iterator[None]:
    """Log start and end of a unit of work; a crash is logged and re-raised."""
    log = logger or logging.getLogger(LOGGER_NAME)
    log.info("phase start: %s", name)
    started = time.time()
    try:
        yield
    except Exception:
        log.exception("phase crash: %s", name)
        raise
    log.info("phase end: %s (%.2fs)", name, time.time() - started)
