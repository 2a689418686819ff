"""
General Utility Functions

Provides logging configuration shared by the CLI and the test suite.
"""

import logging
import os


def configure_logging(level: str | None = None):
    """
    Configure logging based on environment variables.

    Log records go to standard error so that reports written to standard
    output stay machine-readable.

    Environment variables:
        LOG_LEVEL: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        LOG_FORMAT: Log message format string

    Args:
        level: Explicit level overriding LOG_LEVEL (e.g. from a --verbose flag)
    """
    log_level = (level or os.getenv("LOG_LEVEL", "INFO")).upper()
    log_format = os.getenv("LOG_FORMAT", "%(asctime)s - %(name)s - %(levelname)s - %(message)s")

    # Convert string log level to logging constant
    level_map = {
        "DEBUG": logging.DEBUG,
        "INFO": logging.INFO,
        "WARNING": logging.WARNING,
        "ERROR": logging.ERROR,
        "CRITICAL": logging.CRITICAL,
    }

    logging.basicConfig(
        level=level_map.get(log_level, logging.INFO),
        format=log_format,
        force=True,  # Override any existing configuration
    )

    return logging.getLogger(__name__)
