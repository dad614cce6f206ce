from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class BoundSettings(BaseSettings):
    """Loads DRMB_* from env/.env"""

    model_config = SettingsConfigDict(
        env_prefix="DRMB_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    seed: int = Field(default=20240917, description="Default oracle seed")
    envelope_resolution: int = Field(
        default=2001,
        ge=3,
        description="Grid size for envelopes of non-piecewise distortions",
    )
    scan_points: int = Field(
        default=1024, ge=8, description="Coarse scan size for the b-optimizers"
    )
    golden_tol: float = Field(
        default=1e-10, gt=0, description="Golden-section stopping width in b"
    )
    quad_tol: float = Field(
        default=1e-10, gt=0, description="Absolute quadrature tolerance"
    )
    quad_limit: int = Field(
        default=200, ge=10, description="Subinterval limit per quadrature call"
    )
    feasibility_tol: float = Field(default=1e-9, gt=0)
    violation_tol: float = Field(default=1e-7, gt=0)
    attainment_tol: float = Field(default=1e-4, gt=0)
    oracle_budget: int = Field(
        default=10_000, ge=100, description="Candidate evaluations per search"
    )
    export_grid: int = Field(
        default=101, ge=2, description="Interior grid size for quantile CSV export"
    )
    precision: int = Field(
        default=9, ge=1, le=17, description="Decimals in CLI output"
    )
    log_level: str = Field(default="WARNING")
    log_dir: Optional[str] = Field(
        default=None, description="Folder for date-named log files (optional)"
    )


_settings: Optional[BoundSettings] = None


def get_settings() -> BoundSettings:
    global _settings
    if _settings is None:
        _settings = BoundSettings()
    return _settings


def configure(**overrides) -> BoundSettings:
    """Reload settings from env/.env, with non-None ``overrides`` taking precedence."""
    global _settings
    _settings = BoundSettings(
        **{key: value for key, value in overrides.items() if value is not None}
    )
    return _settings
