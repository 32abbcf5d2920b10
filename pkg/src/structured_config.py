#!/usr/bin/env python3
# Copyright 2023 Canonical Ltd.
# See LICENSE file for licensing details.

"""Structured configuration for liederive."""
import logging
import os
from enum import Enum
from typing import Any, Dict, List, Mapping, NamedTuple, Optional

import yaml
from pydantic import BaseModel, validator

from exactla import InvalidDomainError, ScalarDomain
from literals import CONFIG_ENV, CONFIG_FILE, THREADS_ENV
from utils import safe_get_file

logger = logging.getLogger(__name__)


class LogLevel(str, Enum):
    """Enum for the `log_level` field."""

    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"


class WittWindow(NamedTuple):
    n_vars: int
    deg_cap: int
    inner_cap: int

    @property
    def name(self) -> str:
        return f"{self.n_vars}:{self.deg_cap}:{self.inner_cap}"


def parse_fields(value: str) -> List[ScalarDomain]:
    """Parses a comma separated list of field descriptors such as `Q,F5,F7`."""
    return [ScalarDomain.from_spec(item) for item in value.split(",") if item.strip()]


def parse_windows(value: str) -> List[WittWindow]:
    """Parses a comma separated list of `n:N:N_in` Witt windows."""
    windows = []
    for item in value.split(","):
        if not item.strip():
            continue
        parts = item.strip().split(":")
        if len(parts) != 3 or not all(p.isdigit() for p in parts):
            raise ValueError(f"window {item!r} is not of the form n:N:N_in")
        windows.append(WittWindow(*(int(p) for p in parts)))
    return windows


class BaseConfigModel(BaseModel):
    """Class to be used for defining the structured configuration options."""

    def __getitem__(self, x):
        """Return the item using the notation instance[key]."""
        return getattr(self, x.replace("-", "_"))


class SolverConfig(BaseConfigModel):
    """Manager for the structured configuration."""

    threads: int
    enumeration_limit: int
    rational_grid_radius: int
    exhaustive_prime_bound: int
    verify_max_rank: int
    verify_fields: str
    witt_windows: str
    golden_dir: str
    random_seed: int
    log_level: str

    @validator("threads", "rational_grid_radius")
    @classmethod
    def non_negative(cls, value: int) -> int:
        """Check value greater or equal than zero."""
        if value < 0:
            raise ValueError("Value below 0. Accepted values are greater or equal than 0.")
        return value

    @validator("enumeration_limit")
    @classmethod
    def greater_than_zero(cls, value: int) -> int:
        """Check value greater than zero."""
        if value < 1:
            raise ValueError("Value below 1. Accepted values are greater or equal than 1.")
        return value

    @validator("exhaustive_prime_bound")
    @classmethod
    def at_least_two(cls, value: int) -> int:
        """Check value is a usable prime bound."""
        if value < 2:
            raise ValueError("Value below 2. Accepted values are greater or equal than 2.")
        return value

    @validator("verify_max_rank")
    @classmethod
    def rank_in_range(cls, value: int) -> int:
        """Check that the rank is between one and eight."""
        if 1 <= value <= 8:
            return value
        raise ValueError("Value out of range. Accepted values are 1 to 8.")

    @validator("verify_fields")
    @classmethod
    def fields_validator(cls, value: str) -> str:
        """Check validity of `verify_fields` field."""
        try:
            fields = parse_fields(value)
        except InvalidDomainError as e:
            raise ValueError(f"Could not parse the field list: {e.message}")
        if not fields:
            raise ValueError("At least one field is required.")
        return value

    @validator("witt_windows")
    @classmethod
    def windows_validator(cls, value: str) -> str:
        """Check validity of `witt_windows` field."""
        parse_windows(value)
        return value

    @validator("log_level")
    @classmethod
    def log_level_validator(cls, value: str) -> str:
        """Check validity of `log_level` field."""
        try:
            _log_level = LogLevel(value.upper())
        except Exception as e:
            raise ValueError(f"Value out of the accepted values: {e}")
        return value.upper()

    @property
    def fields(self) -> List[ScalarDomain]:
        return parse_fields(self.verify_fields)

    @property
    def windows(self) -> List[WittWindow]:
        return parse_windows(self.witt_windows)


def _default_config_path() -> str:
    return os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), CONFIG_FILE)


def load_config(
    path: Optional[str] = None,
    env: Optional[Mapping[str, str]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> SolverConfig:
    """Reads option defaults from a config.yaml and applies environment and explicit overrides.

    Args:
        path: the config file, defaulting to `LIEDERIVE_CONFIG` then the repository config.yaml
        env: the environment to read, defaulting to `os.environ`
        overrides: values that win over everything else, None values are ignored

    Returns:
        The validated configuration

    Raises:
        FileNotFoundError: if the config file does not exist
        pydantic.ValidationError: if some option is invalid
    """
    env = os.environ if env is None else env
    path = path or env.get(CONFIG_ENV) or _default_config_path()
    raw = safe_get_file(path)
    if raw is None:
        raise FileNotFoundError(path)

    declared = (yaml.safe_load(raw) or {}).get("options", {})
    options: Dict[str, Any] = {name: spec.get("default") for name, spec in declared.items()}
    if env.get(THREADS_ENV, "").strip():
        options["threads"] = env[THREADS_ENV].strip()
    for key, value in (overrides or {}).items():
        if value is not None:
            options[key] = value

    config = SolverConfig(**{k.replace("-", "_"): v for k, v in options.items()})
    logger.debug(f"loaded configuration from {path}: {config}")
    return config
