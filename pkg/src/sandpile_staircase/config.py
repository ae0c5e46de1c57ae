"""
Configuration management for sandpile-staircase.
Loads and validates settings from environment variables.
"""

import logging
import os

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

LIST_FORMATS = ("parts", "json")


class Config:
    """Configuration settings loaded from environment variables."""

    def __init__(self):
        """Initialize configuration from environment variables."""
        # =====================================================================
        # ORACLE
        # =====================================================================
        # Breadth-first search explodes quickly; refuse n above this bound
        self.oracle_max_n = self._get_int_env("ORACLE_MAX_N", 40, minimum=0)

        # =====================================================================
        # COUNTING
        # =====================================================================
        self.count_table_max_n = self._get_int_env("COUNT_TABLE_MAX_N", 2000, minimum=0)

        # =====================================================================
        # SAMPLING
        # =====================================================================
        # 64-bit seed used by `random` when --seed is not given
        self.random_seed = self._get_int_env("RANDOM_SEED", 0, minimum=0)
        if self.random_seed >= 2**64:
            raise ValueError("Environment variable 'RANDOM_SEED' must fit in 64 bits")

        # =====================================================================
        # BENCHMARK
        # =====================================================================
        # Fibers of different widths are independent; >1 runs them in a process pool
        self.bench_workers = self._get_int_env("BENCH_WORKERS", 1, minimum=1)

        # =====================================================================
        # OUTPUT
        # =====================================================================
        self.list_format = os.getenv("LIST_FORMAT", "parts").strip().lower()
        if self.list_format not in LIST_FORMATS:
            raise ValueError(f"Environment variable 'LIST_FORMAT' must be one of {', '.join(LIST_FORMATS)}")

        # =====================================================================
        # LOGGING
        # =====================================================================
        log_level = os.getenv("LOG_LEVEL", "WARNING").upper()
        if log_level == "WARN":
            log_level = "WARNING"
        self.log_level = getattr(logging, log_level, logging.WARNING)

        logger.debug(
            f"Configuration loaded: oracle_max_n={self.oracle_max_n}, "
            f"count_table_max_n={self.count_table_max_n}, bench_workers={self.bench_workers}"
        )

    @staticmethod
    def _get_int_env(key: str, default: int, minimum: int | None = None) -> int:
        """Get an optional integer environment variable."""
        raw = os.getenv(key)
        if raw is None or not raw.strip():
            return default
        try:
            value = int(raw.strip())
        except ValueError:
            raise ValueError(f"Environment variable '{key}' must be an integer, got {raw!r}") from None
        if minimum is not None and value < minimum:
            raise ValueError(f"Environment variable '{key}' must be >= {minimum}, got {value}")
        return value


def setup_logging(config: Config):
    """Configure logging for the application."""
    logging.basicConfig(
        level=config.log_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
