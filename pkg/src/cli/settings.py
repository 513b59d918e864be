"""
Process-level settings read from the environment (prefix ``TRANSITSIM_``).

Command-line flags take precedence over these values.
"""

from typing import Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Logging and parallelism defaults for the CLI."""
    model_config = SettingsConfigDict(env_prefix='TRANSITSIM_', env_file='.env', extra='ignore')

    LOG_LEVEL: str = Field(default='INFO')
    LOG_FORMAT: Literal['text', 'json'] = Field(default='text')
    WORKERS: int = Field(default=1, ge=1)

    @field_validator('LOG_LEVEL')
    @classmethod
    def _upper_level(cls, v: str) -> str:
        v = v.upper()
        if v not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            raise ValueError(f"unknown log level {v}")
        return v


def get_settings() -> Settings:
    """Fresh settings from the current environment."""
    return Settings()
