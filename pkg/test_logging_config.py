"""Tests for logging_config.py"""

import io
import logging
import sys
import unittest
from unittest.mock import patch

from logging_config import LOGGER_NAME, current_level_name, get_logger, setup_logging


class TestLoggingConfig(unittest.TestCase):
    """Test cases for logging configuration"""

    def test_setup_logging_default_level(self):
        """Test that setup_logging works with default level"""
        logger = logging.getLogger(LOGGER_NAME)
        logger.handlers.clear()
        logger = setup_logging()
        assert logger is not None
        assert logger.name == "unitriangular_census"
        assert logger.level == logging.INFO
        assert logger.propagate is False

    def test_setup_logging_custom_level(self):
        """Test that setup_logging works with custom level"""
        logger = logging.getLogger("unitriangular_census_test_level")
        logger.handlers.clear()

        with patch("logging_config.logging.getLogger", return_value=logger):
            test_logger = setup_logging("DEBUG")
            assert test_logger.level == logging.DEBUG

    def test_setup_logging_unknown_level_falls_back_to_info(self):
        """Test that an unknown level name configures INFO"""
        logger = logging.getLogger("unitriangular_census_test_unknown")
        logger.handlers.clear()

        with patch("logging_config.logging.getLogger", return_value=logger):
            test_logger = setup_logging("CHATTY")
            assert test_logger.level == logging.INFO

    def test_get_logger(self):
        """Test that get_logger returns the configured logger"""
        setup_logging()
        logger = get_logger()
        assert logger.name == "unitriangular_census"

    def test_logging_output(self):
        """Test that logging actually produces output"""
        test_logger = logging.getLogger("unitriangular_census_test_output")
        test_logger.handlers.clear()
        test_logger.setLevel(logging.INFO)

        log_capture_string = io.StringIO()
        test_logger.addHandler(logging.StreamHandler(log_capture_string))

        test_logger.info("census finished for n=%s", 3)

        assert "census finished for n=3" in log_capture_string.getvalue()

    def test_logging_prevents_duplicate_handlers(self):
        """Test that multiple calls to setup_logging don't add duplicate handlers"""
        logger = logging.getLogger("unitriangular_census_dup_test")
        logger.handlers.clear()

        with patch("logging_config.logging.getLogger", return_value=logger):
            logger1 = setup_logging("INFO")
            logger2 = setup_logging("DEBUG")

            assert logger1 is logger2
            assert len(logger1.handlers) == len(logger2.handlers) == 1

    def test_records_name_the_process(self):
        """Records carry the process name so worker shards can be told apart"""
        logger = logging.getLogger("unitriangular_census_test_format")
        logger.handlers.clear()

        with patch("logging_config.logging.getLogger", return_value=logger):
            setup_logging("INFO")
        handler = logger.handlers[0]
        assert handler.stream is sys.stderr
        record = logging.LogRecord(logger.name, logging.INFO, __file__, 1, "shard %s done", (4,), None)
        assert "MainProcess" in handler.format(record)
        assert "shard 4 done" in handler.format(record)

    def test_current_level_name(self):
        """The effective level is reported by name for worker initializers"""
        logger = logging.getLogger(LOGGER_NAME)
        logger.handlers.clear()
        setup_logging("DEBUG")
        assert current_level_name() == "DEBUG"
        logger.handlers.clear()
        setup_logging()
