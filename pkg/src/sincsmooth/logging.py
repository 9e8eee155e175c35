from __future__ import annotations

from loguru import logger
from rich.console import Console
from rich.logging import RichHandler
from rich.traceback import install as rich_traceback_install


def configure_logging(level: str = "INFO") -> None:
    # stdout carries CSV and JSON payloads, so every log line goes to stderr
    rich_traceback_install(console=Console(stderr=True))

    logger.remove()
    handler = RichHandler(
        console=Console(stderr=True),
        rich_tracebacks=True,
        markup=False,
        show_time=False,
        show_level=True,
        show_path=False,
    )
    logger.add(handler, level=level.upper(), format="{message}")
