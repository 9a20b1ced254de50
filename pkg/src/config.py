"""
Runtime configuration.

Values come from the environment (optionally a .env file loaded with
python-dotenv). Physical parameters are NOT configured here; they live in
scenario files (see src/scenario.py).
"""

import logging
import os
from functools import lru_cache
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from src.errors import ConfigError


load_dotenv()


BASE_DIR = Path(__file__).resolve().parent.parent
DATA_DIR = BASE_DIR / "data"
OUTPUT_DIR = BASE_DIR / "output"

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


class Settings(BaseModel):
    """Environment-driven settings."""
    log_level: str = Field(
        default="INFO",
        description="Root log level (SWARMSLING_LOG_LEVEL)"
    )
    data_dir: Path = Field(
        default=DATA_DIR,
        description="Directory holding scenarios and sweep grids (SWARMSLING_DATA_DIR)"
    )
    output_dir: Path = Field(
        default=OUTPUT_DIR,
        description="Default directory for CSV/report output (SWARMSLING_OUTPUT_DIR)"
    )
    seed: Optional[int] = Field(
        default=None,
        description="Reserved (SWARMSLING_SEED); the model is deterministic"
    )


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Read settings from the environment once.

    Raises:
        ConfigError: when a SWARMSLING_* variable does not validate
    """
    try:
        return Settings(
            log_level=os.getenv("SWARMSLING_LOG_LEVEL", "INFO").upper(),
            data_dir=os.getenv("SWARMSLING_DATA_DIR", str(DATA_DIR)),
            output_dir=os.getenv("SWARMSLING_OUTPUT_DIR", str(OUTPUT_DIR)),
            seed=os.getenv("SWARMSLING_SEED") or None,
        )
    except ValidationError as exc:
        raise ConfigError(f"invalid SWARMSLING_* environment setting: {exc}") from exc


def configure_logging(level: Optional[str] = None) -> None:
    """Configure the root logger; `level` overrides the settings value."""
    logging.basicConfig(
        level=(level or get_settings().log_level).upper(),
        format=LOG_FORMAT,
    )
