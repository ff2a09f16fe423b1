"""
Runtime configuration loaded from the environment and an optional .env file
"""
import os
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field

from pellforms.errors import ConfigError

ENV_PREFIX = "PELLFORMS_"


def _env_int(name: str, default: int, minimum: int = 1) -> int:
    raw = os.getenv(ENV_PREFIX + name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{ENV_PREFIX}{name} must be an integer, got {raw!r}")
    if value < minimum:
        raise ConfigError(f"{ENV_PREFIX}{name} must be >= {minimum}, got {value}")
    return value


def _env_str(name: str, default: str) -> str:
    raw = os.getenv(ENV_PREFIX + name)
    return default if raw is None else raw.strip()


class Settings(BaseModel):
    """Typed view of the PELLFORMS_* environment"""
    model_config = ConfigDict(frozen=True)

    log_level: str = Field("INFO", description="Root log level for CLI runs")
    log_dir: Optional[str] = Field(None, description="Directory for timestamped log files; None disables file logging")
    report_dir: str = Field("./reports", description="Where `pell grid --save` writes reports")
    digits: int = Field(24, ge=1, description="Default decimal digits for approx-root")
    max_iter: int = Field(200, ge=1, description="Default truncation budget for approx-root")
    grid_kmax: int = Field(5, ge=1, description="Default k cap for Pell grids")
    grid_rmax: int = Field(5, ge=1, description="Default r cap for Pell grids")
    workers: int = Field(4, ge=1, description="Thread pool size for grid verification")
    families_path: str = Field("./config/pell_families.json", description="Printed family coefficient tables")
    gig_fixture: str = Field("./data/gig_example.txt", description="900-digit worked example fixture")

    @classmethod
    def from_env(cls, dotenv_path: Optional[str] = None) -> "Settings":
        """Build settings from the process environment, loading .env first"""
        load_dotenv(dotenv_path=dotenv_path, override=False)

        log_level = _env_str("LOG_LEVEL", "INFO").upper()
        if log_level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ConfigError(f"{ENV_PREFIX}LOG_LEVEL has unknown level {log_level!r}")

        return cls(
            log_level=log_level,
            log_dir=_env_str("LOG_DIR", "") or None,
            report_dir=_env_str("REPORT_DIR", "./reports"),
            digits=_env_int("DIGITS", 24),
            max_iter=_env_int("MAX_ITER", 200),
            grid_kmax=_env_int("GRID_KMAX", 5),
            grid_rmax=_env_int("GRID_RMAX", 5),
            workers=_env_int("WORKERS", 4),
            families_path=_env_str("FAMILIES_PATH", default_families_path()),
            gig_fixture=_env_str("GIG_FIXTURE", default_gig_fixture()),
        )


def _repo_root() -> str:
    return os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def default_families_path() -> str:
    return os.path.join(_repo_root(), "config", "pell_families.json")


def default_gig_fixture() -> str:
    return os.path.join(_repo_root(), "data", "gig_example.txt")


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Process-wide settings, built once"""
    return Settings.from_env()
