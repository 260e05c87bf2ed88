import copy
import logging
import os
from dataclasses import dataclass, fields, replace
from typing import Any, Dict, Optional

import yaml

from errors import ConfigError

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "config.yaml")
LOG_ENV_VAR = "GEOCOLUMN_LOG"

COMPRESSIONS = ("none", "deflate")
SORT_CURVES = ("none", "z", "hilbert")
COORDINATE_ENCODINGS = ("fp_delta", "raw")

DEFAULTS: Dict[str, Any] = {
    "writer": {
        "page_size": 1 << 20,
        "row_group_bytes": 64 << 20,
        "batch_size": 1_000_000,
        "compression": "none",
        "sort": "none",
        "coordinate_encoding": "fp_delta",
        "encode_workers": 4,
        "with_ids": False,
        "on_invalid": "abort",
    },
    "query": {"output_format": "wkt"},
    "synthetic": {
        "count": 100_000,
        "clusters": 100,
        "stddev": 3.6,
        "bbox": [-180.0, -90.0, 180.0, 90.0],
        "seed": 42,
        "resolution": None,
        "polygon_fraction": 0.0,
        "polygon_radius": 0.05,
    },
    "bench": {"repeat": 1, "page_size": 65536, "queries": 20, "query_area": 0.0001, "shuffle": False},
    "logging": {"level": "WARNING"},
}


def _merge(base: dict, override: dict) -> dict:
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """Load config.yaml merged over the built-in defaults"""
    path = config_path or DEFAULT_CONFIG_PATH
    if not os.path.exists(path):
        if config_path is not None:
            raise ConfigError(f"Config file not found: {config_path}")
        return copy.deepcopy(DEFAULTS)
    with open(path, 'r') as f:
        loaded = yaml.safe_load(f) or {}
    if not isinstance(loaded, dict):
        raise ConfigError(f"Config root must be a mapping: {path}")
    return _merge(DEFAULTS, loaded)


def save_config(config: Dict[str, Any], config_path: Optional[str] = None):
    with open(config_path or DEFAULT_CONFIG_PATH, 'w') as f:
        yaml.dump(config, f, default_flow_style=False, sort_keys=False)


def configure_logging(config: Optional[Dict[str, Any]] = None) -> int:
    """Set the root log level from GEOCOLUMN_LOG, falling back to the config"""
    raw = os.environ.get(LOG_ENV_VAR)
    if raw is None:
        raw = (config or DEFAULTS).get("logging", {}).get("level", "WARNING")
    raw = str(raw).strip()
    if raw.isdigit():
        level = int(raw)
    else:
        level = logging.getLevelName(raw.upper())
        if not isinstance(level, int):
            raise ConfigError(f"Unknown log level: {raw}")
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(level)
    return level


@dataclass(frozen=True)
class WriteOptions:
    page_size: int = 1 << 20
    row_group_bytes: int = 64 << 20
    batch_size: int = 1_000_000
    compression: str = "none"
    sort: str = "none"
    coordinate_encoding: str = "fp_delta"
    encode_workers: int = 4
    with_ids: bool = False
    on_invalid: str = "abort"

    def __post_init__(self):
        if self.page_size < 64:
            raise ConfigError(f"page_size must be at least 64 bytes, got {self.page_size}")
        if self.row_group_bytes < self.page_size:
            raise ConfigError("row_group_bytes must not be smaller than page_size")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be positive, got {self.batch_size}")
        if self.compression not in COMPRESSIONS:
            raise ConfigError(f"compression must be one of {COMPRESSIONS}, got {self.compression!r}")
        if self.sort not in SORT_CURVES:
            raise ConfigError(f"sort must be one of {SORT_CURVES}, got {self.sort!r}")
        if self.coordinate_encoding not in COORDINATE_ENCODINGS:
            raise ConfigError(
                f"coordinate_encoding must be one of {COORDINATE_ENCODINGS}, got {self.coordinate_encoding!r}")
        if self.encode_workers < 1:
            raise ConfigError("encode_workers must be at least 1")
        if self.on_invalid not in ("abort", "skip"):
            raise ConfigError(f"on_invalid must be 'abort' or 'skip', got {self.on_invalid!r}")

    @classmethod
    def from_config(cls, config: Optional[Dict[str, Any]] = None, **overrides) -> "WriteOptions":
        section = dict((config or DEFAULTS).get("writer", {}))
        known = {f.name for f in fields(cls)}
        values = {k: v for k, v in section.items() if k in known}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def with_overrides(self, **overrides) -> "WriteOptions":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})
