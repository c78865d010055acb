"""Service configuration: one TOML file plus environment overrides.

Environment variables win over the file so containers can retarget a
deployment without editing it: BORDERFLOW_PORT and BORDERFLOW_DATA_DIR.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

ENV_PORT = "BORDERFLOW_PORT"
ENV_DATA_DIR = "BORDERFLOW_DATA_DIR"


class ConfigError(ValueError):
    """The service configuration is unreadable or out of range."""


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    data_dir: Path = Path("data")

    def validate(self) -> None:
        if not 1 <= self.port <= 65535:
            raise ConfigError(f"port must be in 1..65535, got {self.port}")


def load_config(path: str | Path | None = None, env: dict | None = None) -> ServiceConfig:
    env = os.environ if env is None else env
    host = "127.0.0.1"
    port = 8000
    data_dir = Path("data")

    if path is not None:
        raw = Path(path).read_bytes()
        try:
            doc = tomllib.loads(raw.decode("utf-8"))
        except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        section = doc.get("service", {})
        if not isinstance(section, dict):
            raise ConfigError(f"{path}: [service] must be a table")
        unknown = sorted(set(section) - {"host", "port", "data_dir"})
        if unknown:
            raise ConfigError(f"{path}: unknown [service] keys: {', '.join(unknown)}")
        host = str(section.get("host", host))
        port = section.get("port", port)
        data_dir = Path(section.get("data_dir", data_dir))

    if ENV_PORT in env:
        try:
            port = int(env[ENV_PORT])
        except ValueError as exc:
            raise ConfigError(f"{ENV_PORT} must be an integer") from exc
    if ENV_DATA_DIR in env:
        data_dir = Path(env[ENV_DATA_DIR])

    if not isinstance(port, int) or isinstance(port, bool):
        raise ConfigError(f"port must be an integer, got {port!r}")
    config = ServiceConfig(host=host, port=port, data_dir=data_dir)
    config.validate()
    return config
