"""Logging configuration and utilities for the unitriangular census tool.

Log records go to stderr so that JSON results printed on stdout stay machine
readable. Census shards run in worker processes; each worker calls
setup_logging through the pool initializer with the parent's level, and the
process name in every record tells the shards apart.
"""

import logging
import sys

LOGGER_NAME = "unitriangular_census"
LOG_FORMAT = "%(asctime)s - %(name)s - %(processName)s - %(levelname)s - %(message)s"


def setup_logging(level: str = "INFO") -> logging.Logger:
    """Configure and return the application logger.

    Args:
        level (str): Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL).
                    Unknown names fall back to INFO.

    Returns:
        logging.Logger: Configured logger instance
    """
    logger = logging.getLogger(LOGGER_NAME)
    if logger.handlers:
        return logger

    numeric_level = getattr(logging, level.upper(), logging.INFO)
    logger.setLevel(numeric_level)

    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(numeric_level)
    handler.setFormatter(logging.Formatter(fmt=LOG_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))
    logger.addHandler(handler)
    logger.propagate = False
    return logger


def get_logger() -> logging.Logger:
    return logging.getLogger(LOGGER_NAME)


def current_level_name() -> str:
    """The effective level of the application logger, as a name setup_logging accepts."""
    return logging.getLevelName(get_logger().getEffectiveLevel())
