"""
Utility functions and helpers for the weighted k-modes package.

Logging goes through the standard library loggers but is rendered with a
rich handler so CLI output keeps the same look as the rest of the console
output.
"""

from __future__ import annotations

import logging
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

ROOT_LOGGER = "weighted_kmodes"

_VERBOSITY_LEVELS = {0: logging.WARNING, 1: logging.INFO}


def get_logger(name: str) -> logging.Logger:
    """Return a logger under the package namespace."""
    name = name.removeprefix("src.")
    if name == ROOT_LOGGER or name.startswith(ROOT_LOGGER + "."):
        return logging.getLogger(name)
    return logging.getLogger(f"{ROOT_LOGGER}.{name}")


def configure_logging(verbosity: int = 0, console: Optional[Console] = None) -> logging.Logger:
    """
    Install a single rich handler on the package root logger.

    Args:
        verbosity: 0 for warnings, 1 for info, 2 or more for debug output
        console: Console to render to (defaults to stderr)

    Returns:
        The configured package root logger
    """
    logger = logging.getLogger(ROOT_LOGGER)
    level = _VERBOSITY_LEVELS.get(verbosity, logging.DEBUG) if verbosity >= 0 else logging.WARNING

    for handler in list(logger.handlers):
        if isinstance(handler, RichHandler):
            logger.removeHandler(handler)

    handler = RichHandler(
        console=console or Console(stderr=True),
        show_path=False,
        markup=True,
        rich_tracebacks=False,
    )
    handler.setFormatter(logging.Formatter("%(message)s"))
    logger.addHandler(handler)
    logger.setLevel(level)
    logger.propagate = False
    return logger


__all__ = ["ROOT_LOGGER", "configure_logging", "get_logger"]
