import logging
import os

from pydantic import BaseModel, Field, field_validator

from digraphs.constants import (
    DEFAULT_BUDGET,
    DEFAULT_FREE_BUDGET,
    DEFAULT_MAX_N,
    DEFAULT_ORACLE_CAP,
    DEFAULT_TERM_BUDGET,
)

ENV_PREFIX = "DIGRAPHS_"


class Settings(BaseModel):
    """Budgets and logging, read from DIGRAPHS_* environment variables."""

    log_level: str = "ERROR"
    budget: int = Field(DEFAULT_BUDGET, gt=0)
    free_budget: int = Field(DEFAULT_FREE_BUDGET, gt=0)
    term_budget: int = Field(DEFAULT_TERM_BUDGET, gt=0)
    oracle_cap: int = Field(DEFAULT_ORACLE_CAP, gt=0)
    max_n: int = Field(DEFAULT_MAX_N, gt=0)
    mcp_disabled_tools: list[str] = Field(default_factory=list)

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        if not isinstance(logging.getLevelName(value), int):
            raise ValueError(f"unknown log level {value!r}")
        return value

    @field_validator("mcp_disabled_tools", mode="before")
    @classmethod
    def _split_groups(cls, value):
        # e.g. DIGRAPHS_MCP_DISABLED_TOOLS=checks,polymorph
        if isinstance(value, str):
            return [group.strip() for group in value.split(",") if group.strip()]
        return value

    @classmethod
    def from_env(cls, **overrides) -> "Settings":
        values = {}
        for name in cls.model_fields:
            raw = os.getenv(ENV_PREFIX + name.upper())
            if raw is not None and raw.strip():
                values[name] = raw.strip()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls.model_validate(values)


def configure_logging(settings: Settings) -> None:
    logging.basicConfig(
        level=getattr(logging, settings.log_level, logging.ERROR),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    if settings.log_level != "DEBUG":
        logging.getLogger("asyncio").setLevel(logging.ERROR)
