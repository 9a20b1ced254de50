"""Tests for environment-driven settings."""

from pathlib import Path

import pytest

from src.config import DATA_DIR, get_settings
from src.errors import ConfigError


@pytest.fixture
def fresh_settings():
    get_settings.cache_clear()
    yield get_settings
    get_settings.cache_clear()


def test_defaults(monkeypatch, fresh_settings):
    for name in ("SWARMSLING_LOG_LEVEL", "SWARMSLING_DATA_DIR", "SWARMSLING_SEED"):
        monkeypatch.delenv(name, raising=False)
    settings = fresh_settings()
    assert settings.log_level == "INFO"
    assert settings.data_dir == DATA_DIR
    assert settings.seed is None


def test_reads_environment(monkeypatch, tmp_path, fresh_settings):
    monkeypatch.setenv("SWARMSLING_LOG_LEVEL", "debug")
    monkeypatch.setenv("SWARMSLING_OUTPUT_DIR", str(tmp_path))
    monkeypatch.setenv("SWARMSLING_SEED", "42")
    settings = fresh_settings()
    assert settings.log_level == "DEBUG"
    assert settings.output_dir == Path(tmp_path)
    assert settings.seed == 42


@pytest.mark.parametrize("seed", ["forty-two", "1.5"])
def test_rejects_non_integer_seed(monkeypatch, fresh_settings, seed):
    monkeypatch.setenv("SWARMSLING_SEED", seed)
    with pytest.raises(ConfigError, match="seed"):
        fresh_settings()
