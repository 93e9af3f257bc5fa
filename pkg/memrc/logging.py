import json
import logging
import sys

from loguru import logger
from loguru._handler import Handler

from memrc import get_serialized_ctx_wrappers


def _serialize_record(text: str, record: dict) -> str:
    """
    One JSON line per record. The run context (experiment id, config hash) sits under `ctx` so a
    line can be traced back to the configuration that produced it.
    """
    exception = record["exception"]
    if exception is not None:
        exception = {
            "type": None if exception.type is None else exception.type.__name__,
            "value": exception.value,
        }
    serializable = {
        "severity": record["level"].name,
        "message": record["message"],
        "timestamp": record["time"].timestamp(),
        "source": f"{record['name']}:{record['function']}:{record['line']}",
        "exception": exception,
        "ctx": get_serialized_ctx_wrappers(),
        "extra": record["extra"],
    }
    return json.dumps(serializable, default=str, ensure_ascii=False) + "\n"


Handler._serialize_record = staticmethod(_serialize_record)  # type: ignore


def _configure(level: int, serialize: bool) -> None:
    # results (tables, CSV) go to stdout, so log lines stay on stderr
    logger.enable("memrc")
    logger.remove()
    logger.add(
        sys.stderr,
        format="{message}" if serialize else "{time:HH:mm:ss} | {level: <7} | {message}",
        level=level,
        backtrace=False,
        diagnose=False,
        serialize=serialize,
        colorize=not serialize,
    )


def configure_pretty_logging(level: int = logging.INFO) -> None:
    """Enables the 'memrc' logger with colored, human-readable lines."""
    _configure(level, serialize=False)


def configure_json_logging(level: int = logging.INFO) -> None:
    """Enables the 'memrc' logger with one JSON object per line."""
    _configure(level, serialize=True)
