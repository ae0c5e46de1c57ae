"""Tests for configuration loading."""

import logging
import os
from unittest.mock import patch

import pytest


class TestConfig:
    """Tests for Config class."""

    def test_default_values(self):
        """Every variable is optional and has a default."""
        with patch.dict(os.environ, {}, clear=True):
            from sandpile_staircase.config import Config

            config = Config()
            assert config.oracle_max_n == 40
            assert config.count_table_max_n == 2000
            assert config.random_seed == 0
            assert config.bench_workers == 1
            assert config.list_format == "parts"
            assert config.log_level == logging.WARNING

    def test_integer_overrides(self):
        """Integer variables override their defaults."""
        env = {"ORACLE_MAX_N": "25", "COUNT_TABLE_MAX_N": "500", "RANDOM_SEED": "12345", "BENCH_WORKERS": "4"}
        with patch.dict(os.environ, env, clear=True):
            from sandpile_staircase.config import Config

            config = Config()
            assert config.oracle_max_n == 25
            assert config.count_table_max_n == 500
            assert config.random_seed == 12345
            assert config.bench_workers == 4

    def test_blank_value_uses_default(self):
        """Whitespace-only values fall back to the default."""
        with patch.dict(os.environ, {"ORACLE_MAX_N": "  "}, clear=True):
            from sandpile_staircase.config import Config

            assert Config().oracle_max_n == 40

    def test_malformed_integer_raises(self):
        """Config names the offending variable."""
        with patch.dict(os.environ, {"ORACLE_MAX_N": "forty"}, clear=True):
            from sandpile_staircase.config import Config

            with pytest.raises(ValueError, match="ORACLE_MAX_N"):
                Config()

    def test_below_minimum_raises(self):
        """Values under the minimum are rejected."""
        with patch.dict(os.environ, {"BENCH_WORKERS": "0"}, clear=True):
            from sandpile_staircase.config import Config

            with pytest.raises(ValueError, match="BENCH_WORKERS"):
                Config()

    def test_seed_must_fit_64_bits(self):
        """Seeds wider than 64 bits are rejected."""
        with patch.dict(os.environ, {"RANDOM_SEED": str(2**64)}, clear=True):
            from sandpile_staircase.config import Config

            with pytest.raises(ValueError, match="RANDOM_SEED"):
                Config()

    def test_list_format_json(self):
        """LIST_FORMAT is case-insensitive."""
        with patch.dict(os.environ, {"LIST_FORMAT": "JSON"}, clear=True):
            from sandpile_staircase.config import Config

            assert Config().list_format == "json"

    def test_unknown_list_format_raises(self):
        """Only text and json are accepted."""
        with patch.dict(os.environ, {"LIST_FORMAT": "csv"}, clear=True):
            from sandpile_staircase.config import Config

            with pytest.raises(ValueError, match="LIST_FORMAT"):
                Config()

    def test_log_level_warn_alias(self):
        """WARN is accepted as WARNING."""
        with patch.dict(os.environ, {"LOG_LEVEL": "warn"}, clear=True):
            from sandpile_staircase.config import Config

            assert Config().log_level == logging.WARNING

    def test_log_level_debug(self):
        """DEBUG maps to logging.DEBUG."""
        with patch.dict(os.environ, {"LOG_LEVEL": "DEBUG"}, clear=True):
            from sandpile_staircase.config import Config

            assert Config().log_level == logging.DEBUG

    def test_unknown_log_level_falls_back(self):
        """Unknown levels fall back to WARNING."""
        with patch.dict(os.environ, {"LOG_LEVEL": "CHATTY"}, clear=True):
            from sandpile_staircase.config import Config

            assert Config().log_level == logging.WARNING


class TestSetupLogging:
    def test_configures_root_logger(self):
        """setup_logging applies the configured level to the root logger."""
        with patch.dict(os.environ, {"LOG_LEVEL": "INFO"}, clear=True):
            from sandpile_staircase.config import Config, setup_logging

            with patch("sandpile_staircase.config.logging.basicConfig") as mock_basic:
                setup_logging(Config())
            kwargs = mock_basic.call_args.kwargs
            assert kwargs["level"] == logging.INFO
            assert kwargs["format"] == "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
