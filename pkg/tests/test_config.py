import logging

import pytest

from config import DEFAULTS, LOG_ENV_VAR, WriteOptions, configure_logging, load_config, save_config
from errors import ConfigError


def test_shipped_config_matches_defaults_shape():
    config = load_config()
    for section in ("writer", "query", "synthetic", "bench", "logging"):
        assert section in config
    assert WriteOptions.from_config(config).page_size >= 64


def test_missing_explicit_config_is_an_error(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "absent.yaml"))


def test_partial_file_is_merged_over_defaults(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("writer:\n  page_size: 4096\n  sort: z\n")
    config = load_config(str(path))
    assert config["writer"]["page_size"] == 4096
    assert config["writer"]["sort"] == "z"
    assert config["writer"]["row_group_bytes"] == DEFAULTS["writer"]["row_group_bytes"]
    assert config["synthetic"] == DEFAULTS["synthetic"]


def test_non_mapping_root_is_rejected(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("- just\n- a list\n")
    with pytest.raises(ConfigError):
        load_config(str(path))


def test_save_then_load(tmp_path):
    path = str(tmp_path / "saved.yaml")
    config = load_config()
    config["writer"]["compression"] = "deflate"
    save_config(config, path)
    assert load_config(path) == config


def test_environment_overrides_log_level(monkeypatch):
    monkeypatch.setenv(LOG_ENV_VAR, "debug")
    assert configure_logging({"logging": {"level": "ERROR"}}) == logging.DEBUG
    monkeypatch.setenv(LOG_ENV_VAR, "30")
    assert configure_logging() == logging.WARNING
    monkeypatch.setenv(LOG_ENV_VAR, "chatty")
    with pytest.raises(ConfigError):
        configure_logging()


def test_config_log_level_without_environment(monkeypatch):
    monkeypatch.delenv(LOG_ENV_VAR, raising=False)
    assert configure_logging({"logging": {"level": "error"}}) == logging.ERROR


def test_write_options_from_config_with_overrides():
    config = {"writer": {"page_size": 8192, "sort": "z", "bogus": 1}}
    options = WriteOptions.from_config(config, sort="hilbert", compression=None)
    assert options.page_size == 8192
    assert options.sort == "hilbert"
    assert options.compression == "none"
    assert options.with_overrides(compression="deflate").compression == "deflate"


@pytest.mark.parametrize("kwargs", [
    {"page_size": 32},
    {"page_size": 4096, "row_group_bytes": 1024},
    {"batch_size": 0},
    {"compression": "zstd"},
    {"sort": "peano"},
    {"coordinate_encoding": "gorilla"},
    {"encode_workers": 0},
    {"on_invalid": "ignore"},
])
def test_invalid_write_options(kwargs):
    with pytest.raises(ConfigError):
        WriteOptions(**kwargs)
