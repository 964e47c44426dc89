"""loguru sink shared by the CLI and the MCP server."""

from __future__ import annotations

import os
import sys

from loguru import logger

LOG_FORMAT = "<level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan> - <level>{message}</level>"


def configure_logging(default_level: str) -> str:
    """Send log records to stderr at ``LOG_LEVEL``; stdout stays reserved for results and the MCP stream."""
    level = os.getenv("LOG_LEVEL", default_level).upper()
    logger.remove()
    logger.add(sys.stderr, level=level, format=LOG_FORMAT)
    return level
