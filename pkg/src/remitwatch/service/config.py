"""Service configuration with flags > environment > file precedence.

Environment variables use the REMITWATCH_ prefix (REMITWATCH_PORT,
REMITWATCH_DATA_DIR, ...).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from ..errors import InvalidConfig

ENV_PREFIX = "REMITWATCH_"


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8787
    data_dir: str = "./remitwatch-data"
    scenario_path: str | None = None
    heartbeat_seconds: float = 10.0
    tier_thresholds: tuple = (0.5, 0.9)
    model_defaults: dict = field(default_factory=dict)

    def validate(self) -> None:
        # port 0 asks the OS for an ephemeral port (printed at startup)
        if not (0 <= self.port <= 65535):
            raise InvalidConfig("port must be in [1, 65535] (or 0 for ephemeral)")
        if self.heartbeat_seconds <= 0:
            raise InvalidConfig("heartbeat_seconds must be > 0")
        t_med, t_high = self.tier_thresholds
        if not (0.0 <= t_med < t_high <= 1.0):
            raise InvalidConfig("tier thresholds must satisfy 0 <= t_med < t_high <= 1")
        parent = os.path.dirname(os.path.abspath(self.data_dir)) or "."
        if not os.path.isdir(parent):
            raise InvalidConfig(f"data directory parent {parent!r} does not exist")


_FIELD_TYPES = {
    "host": str,
    "port": int,
    "data_dir": str,
    "scenario_path": str,
    "heartbeat_seconds": float,
}


def load_service_config(path=None, env=None, flags=None) -> ServiceConfig:
    """Merge sources by precedence: flags > environment > config file."""
    env = os.environ if env is None else env
    merged: dict = {}
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        for key, value in doc.items():
            if key == "tier_thresholds":
                merged[key] = tuple(value)
            elif key in _FIELD_TYPES or key == "model_defaults":
                merged[key] = value
            else:
                raise InvalidConfig(f"unknown config key {key!r}")
    for key, caster in _FIELD_TYPES.items():
        env_key = ENV_PREFIX + key.upper()
        if env_key in env:
            merged[key] = caster(env[env_key])
    for key, value in (flags or {}).items():
        if value is not None:
            merged[key] = value
    config = ServiceConfig(**merged)
    config.validate()
    return config
