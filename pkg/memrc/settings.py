from pathlib import Path
from typing import Literal, Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Process-level settings read from the environment.
    These parameters can be configured with environment variables or a .env file.
    """

    # MEMRC_DATA: root of the Free Spoken Digit Dataset recordings directory
    data: Optional[Path] = None
    log_format: Literal["pretty", "json"] = "pretty"

    model_config = SettingsConfigDict(
        env_prefix="MEMRC_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


def get_settings() -> Settings:
    return Settings()
