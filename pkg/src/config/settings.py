"""
Unified toolkit configuration using Pydantic BaseSettings.

This module provides environment-specific configuration management for:
- Development: interactive use of the ``dpk`` command line
- Testing: automated tests with silenced logging
- Production: batch verification runs

All settings are loaded from environment variables with sensible defaults.
Settings are validated using Pydantic for type safety.
"""

from pathlib import Path
from typing import Literal, Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

BUNDLED_DATA_DIR = Path(__file__).resolve().parent.parent / "data"


class AppSettings(BaseSettings):
    """Core application settings."""

    ENVIRONMENT: Literal["development", "testing", "production"] = Field(
        default="development",
        description="Application environment"
    )

    APP_NAME: str = Field(
        default="delpezzo-kit",
        description="Application name"
    )

    APP_VERSION: str = Field(
        default="0.1.0",
        description="Application version"
    )

    model_config = SettingsConfigDict(
        env_prefix="",
        case_sensitive=False,
        env_file=".env",
        extra="ignore"
    )


class LoggingSettings(BaseSettings):
    """Logging configuration settings."""

    LOG_LEVEL: str = Field(default="INFO", description="Root log level")
    LOG_DIR: str = Field(default="logs", description="Base directory for log files")
    LOG_FILE_ENABLED: bool = Field(default=False, description="Enable rotating file handler")
    LOG_CLI_FILE: Optional[str] = Field(default=None, description="CLI log file path override")
    LOG_WORKER_FILE: Optional[str] = Field(default=None, description="Verification worker log file path override")
    LOG_FILE_MAX_SIZE: int = Field(default=10 * 1024 * 1024, description="Log file max size in bytes")
    LOG_FILE_BACKUP_COUNT: int = Field(default=5, description="Log file backups to retain")
    LOG_CONSOLE_ENABLED: bool = Field(default=True, description="Enable console logging output")

    model_config = SettingsConfigDict(
        env_prefix="",
        case_sensitive=False,
        env_file=".env",
        extra="ignore"
    )

    def get_service_log_path(self, service_name: str) -> str:
        """Return the file path for the given service log."""
        service_name = service_name.lower()
        explicit_paths = {
            "cli": self.LOG_CLI_FILE,
            "worker": self.LOG_WORKER_FILE,
        }
        explicit_path = explicit_paths.get(service_name)
        if explicit_path:
            return explicit_path
        return str(Path(self.LOG_DIR) / f"{service_name}.log")


class ComputeSettings(BaseSettings):
    """Resource caps and data location for the computational kernels."""

    DPK_DATA_DIR: Optional[str] = Field(
        default=None,
        description="Directory holding the dataset JSON files (defaults to the bundled data)"
    )

    DPK_ORBIT_CAP: int = Field(
        default=10_000_000,
        ge=1,
        description="Maximum orbit size before the Weyl engine gives up"
    )

    DPK_TJURINA_MAX_DEGREE: int = Field(
        default=24,
        ge=2,
        description="Truncation degree at which Tjurina stabilisation is abandoned"
    )

    DPK_TRUNCATION_DEGREE: int = Field(
        default=16,
        ge=4,
        description="Power-series truncation degree for normal-form reduction"
    )

    DPK_POINT_SWEEP_CAP: int = Field(
        default=10_000_000,
        ge=1,
        description="Maximum number of chart points evaluated per surface"
    )

    DPK_JOBS: int = Field(
        default=1,
        ge=1,
        description="Default number of verification worker processes"
    )

    @field_validator("DPK_DATA_DIR")
    @classmethod
    def empty_data_dir_is_unset(cls, v: Optional[str]) -> Optional[str]:
        """Treat an empty override as unset."""
        if v is not None and not v.strip():
            return None
        return v

    model_config = SettingsConfigDict(
        env_prefix="",
        case_sensitive=False,
        env_file=".env",
        extra="ignore"
    )

    def resolve_data_dir(self) -> Path:
        """Directory that dataset files are read from."""
        if self.DPK_DATA_DIR:
            return Path(self.DPK_DATA_DIR)
        return BUNDLED_DATA_DIR


class Settings:
    """
    Unified settings container with environment-specific defaults.

    Automatically loads appropriate configuration based on ENVIRONMENT variable.
    """

    def __init__(self) -> None:
        self.app = AppSettings()
        self.logging = self._get_logging_settings()
        self.compute = ComputeSettings()

    def _get_logging_settings(self) -> LoggingSettings:
        """Logging settings, never writing log files while testing."""
        base_settings = LoggingSettings()
        if self.app.ENVIRONMENT == "testing":
            return base_settings.model_copy(update={"LOG_FILE_ENABLED": False})
        return base_settings


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Return the cached settings instance, creating it on first access."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


__all__ = [
    "AppSettings",
    "LoggingSettings",
    "ComputeSettings",
    "Settings",
    "get_settings",
    "BUNDLED_DATA_DIR",
]
