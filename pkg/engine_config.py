#!/usr/bin/env python3
"""
Settings for the verification engine.

Environment variables (loaded from engine_config.env when present) give the defaults,
an optional TOML file overrides them, and command-line flags override both.
"""

import logging
import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from frobenius import ConfigError, FrobeniusAlgebra, format_rational, parse_rational

# Load environment variables
load_dotenv('engine_config.env')

logger = logging.getLogger(__name__)

MAX_N_POINT = 8
MAX_N_SMALL = 6
MAX_N_LARGE = 4
LARGE_ALGEBRA_DIM = 8

SUITES = (
    "heisenberg",
    "jucys",
    "goulden",
    "comm",
    "eta",
    "zeromode",
    "walg",
    "universality",
    "stability",
    "generators",
    "deform",
    "dictionary",
    "chern",
)

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


def env_flag(name: str, default: bool = False) -> bool:
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in ("1", "true", "yes", "on")


def env_settings() -> Dict[str, Any]:
    """SYMPROD_* variables with their defaults, read at call time"""
    try:
        workers = int(os.getenv("SYMPROD_WORKERS", "4"))
    except ValueError:
        raise ConfigError(f"SYMPROD_WORKERS must be an integer, got {os.getenv('SYMPROD_WORKERS')!r}")
    return {
        "algebra_dir": os.getenv("SYMPROD_ALGEBRA_DIR", "algebras"),
        "output_dir": os.getenv("SYMPROD_OUTPUT_DIR", "reports"),
        "store_dir": os.getenv("SYMPROD_STORE_DIR", "stable_store"),
        "workers": workers,
        "log_level": os.getenv("SYMPROD_LOG_LEVEL", "INFO").upper(),
        "unsafe_caps": env_flag("SYMPROD_UNSAFE_CAPS"),
    }


def configure_logging(level: Optional[str] = None) -> None:
    level = (level or env_settings()["log_level"]).upper()
    # getLevelNamesMapping is Python 3.11+; _nameToLevel is the same table on 3.10
    names = logging.getLevelNamesMapping() if hasattr(logging, "getLevelNamesMapping") else logging._nameToLevel
    if level not in names:
        raise ConfigError(f"unknown log level {level!r}")
    logging.basicConfig(level=getattr(logging, level), format=LOG_FORMAT)


def n_cap(algebra: FrobeniusAlgebra) -> int:
    """Largest symmetric power a suite may touch without --unsafe-caps"""
    if algebra.dim == 1 and algebra.d == 0:
        return MAX_N_POINT
    if algebra.dim >= LARGE_ALGEBRA_DIM:
        return MAX_N_LARGE
    return MAX_N_SMALL


def resolve_algebra_path(name: str, algebra_dir: Optional[str] = None) -> Path:
    """A path as given, or <algebra_dir>/<name>.json"""
    if not name:
        raise ConfigError("algebra is required")
    candidate = Path(name)
    if candidate.is_file():
        return candidate
    folder = Path(algebra_dir or env_settings()["algebra_dir"])
    for path in (folder / name, folder / f"{name}.json"):
        if path.is_file():
            return path
    raise ConfigError(f"algebra {name!r} not found (looked in {folder})")


class SuiteConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    algebra: str
    suite: str
    max_n: int = 3
    max_k: int = 2
    max_mode: int = 2
    max_pq: int = 4
    s: List[str] = ["1"]
    special_minus_one: bool = False
    L: Optional[str] = None
    hbar_order: int = 2
    output: Optional[str] = None
    workers: int = 4
    unsafe_caps: bool = False

    @field_validator("suite")
    @classmethod
    def _known_suite(cls, value: str) -> str:
        if value not in SUITES:
            raise ValueError(f"suite must be one of {', '.join(SUITES)}, got {value!r}")
        return value

    @field_validator("max_n", "max_k", "max_mode", "max_pq", "hbar_order")
    @classmethod
    def _non_negative(cls, value: int) -> int:
        if value < 0:
            raise ValueError("bounds must be non-negative")
        return value

    @field_validator("workers")
    @classmethod
    def _positive_workers(cls, value: int) -> int:
        if value < 1:
            raise ValueError("workers must be at least 1")
        return value

    @field_validator("s", mode="before")
    @classmethod
    def _rationals(cls, value: Any) -> List[str]:
        if isinstance(value, (str, int)):
            value = [part for part in str(value).split(",") if part.strip()]
        out = []
        for item in value:
            try:
                q = parse_rational(item)
            except ZeroDivisionError:
                raise ValueError(f"s value {item!r} has a zero denominator")
            if not q:
                raise ValueError("s must be nonzero")
            out.append(format_rational(q))
        if not out:
            raise ValueError("s needs at least one value")
        return out

    @classmethod
    def build(cls, **values: Any) -> "SuiteConfig":
        """Construct, reporting validation failures as ConfigError"""
        try:
            return cls(**values)
        except ValidationError as e:
            problems = "; ".join(f"{'.'.join(str(x) for x in err['loc'])}: {err['msg']}" for err in e.errors())
            raise ConfigError(f"invalid suite config: {problems}") from None

    def check_caps(self, algebra: FrobeniusAlgebra) -> None:
        if self.unsafe_caps:
            logger.warning(f"⚠️ caps disabled for {self.suite} on {algebra.name}, this can run for hours")
            return
        cap = n_cap(algebra)
        if self.max_n > cap:
            raise ConfigError(f"max_n = {self.max_n} exceeds the cap {cap} for {algebra.name} (dim {algebra.dim}); pass --unsafe-caps to override")


def load_toml(path: Optional[str]) -> Dict[str, Any]:
    """Flat TOML table mirroring the flags; dashes and underscores are interchangeable"""
    if not path:
        return {}
    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except FileNotFoundError:
        raise ConfigError(f"config file {path} not found")
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"config file {path} is not valid TOML: {e}")
    return {key.replace("-", "_"): value for key, value in data.items()}


def resolve_config(cli_values: Dict[str, Any], config_path: Optional[str] = None) -> SuiteConfig:
    """CLI flags > TOML file > environment > defaults"""
    env = env_settings()
    merged: Dict[str, Any] = {"workers": env["workers"], "unsafe_caps": env["unsafe_caps"]}
    merged.update(load_toml(config_path))
    merged.update({key: value for key, value in cli_values.items() if value is not None and value is not False})
    if cli_values.get("unsafe_caps"):
        merged["unsafe_caps"] = True
    if cli_values.get("special_minus_one"):
        merged["special_minus_one"] = True
    logger.debug(f"resolved config keys: {sorted(merged)}")
    return SuiteConfig.build(**merged)
