from __future__ import annotations

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

_LOG_LEVELS = {"TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"}


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", extra="ignore")

    log_level: str = Field(default="INFO", alias="SINCSMOOTH_LOG_LEVEL")
    threads: int = Field(default=0, alias="SINCSMOOTH_THREADS")

    quad_nodes_per_radius: int = Field(default=8, alias="SINCSMOOTH_QUAD_NODES_PER_RADIUS")
    qmc_points: int = Field(default=16384, alias="SINCSMOOTH_QMC_POINTS")
    max_inverse_ft: float = Field(default=1e12, alias="SINCSMOOTH_MAX_INVERSE_FT")

    denominator_floor_scale: float = Field(
        default=1e-10, alias="SINCSMOOTH_DENOMINATOR_FLOOR_SCALE"
    )
    sigma2_cap: int = Field(default=4000, alias="SINCSMOOTH_SIGMA2_CAP")
    reliability_z: float = Field(default=2.0, alias="SINCSMOOTH_RELIABILITY_Z")

    grad_tol: float = Field(default=1e-7, alias="SINCSMOOTH_GRAD_TOL")
    max_ascent_iter: int = Field(default=500, alias="SINCSMOOTH_MAX_ASCENT_ITER")
    mode_max_starts: int = Field(default=0, alias="SINCSMOOTH_MODE_MAX_STARTS")
    ripple_fraction: float = Field(default=0.05, alias="SINCSMOOTH_RIPPLE_FRACTION")
    branch_fraction: float = Field(default=0.1, alias="SINCSMOOTH_BRANCH_FRACTION")
    prominence_z: float = Field(default=2.5, alias="SINCSMOOTH_PROMINENCE_Z")

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, value: str) -> str:
        normalized = value.strip().upper()
        if normalized not in _LOG_LEVELS:
            raise ValueError(f"log level must be one of {', '.join(sorted(_LOG_LEVELS))}")
        return normalized

    @field_validator("threads")
    @classmethod
    def validate_threads(cls, value: int) -> int:
        if value < 0:
            raise ValueError("threads must be 0 (auto) or positive")
        return value

    @field_validator("quad_nodes_per_radius", "max_ascent_iter")
    @classmethod
    def validate_positive_int(cls, value: int) -> int:
        if value < 1:
            raise ValueError("value must be at least 1")
        return value

    @field_validator("qmc_points")
    @classmethod
    def validate_qmc_points(cls, value: int) -> int:
        if value < 256 or value & (value - 1):
            raise ValueError("qmc_points must be a power of two not below 256")
        return value

    @field_validator("max_inverse_ft")
    @classmethod
    def validate_max_inverse_ft(cls, value: float) -> float:
        if not value > 1.0:
            raise ValueError("max_inverse_ft must be greater than 1")
        return value

    @field_validator("denominator_floor_scale", "grad_tol")
    @classmethod
    def validate_positive_float(cls, value: float) -> float:
        if not value > 0.0:
            raise ValueError("value must be greater than 0")
        return value

    @field_validator("sigma2_cap")
    @classmethod
    def validate_sigma2_cap(cls, value: int) -> int:
        if value < 3:
            raise ValueError("sigma2_cap must be at least 3")
        return value

    @field_validator("mode_max_starts")
    @classmethod
    def validate_mode_max_starts(cls, value: int) -> int:
        if value < 0:
            raise ValueError("mode_max_starts must be 0 (every observation) or positive")
        return value

    @field_validator("ripple_fraction", "branch_fraction")
    @classmethod
    def validate_fraction(cls, value: float) -> float:
        if not 0.0 <= value < 1.0:
            raise ValueError("fraction must be in range [0, 1)")
        return value

    @field_validator("reliability_z", "prominence_z")
    @classmethod
    def validate_non_negative(cls, value: float) -> float:
        if not value >= 0.0:
            raise ValueError("value must not be negative")
        return value


def get_settings() -> Settings:
    return Settings()
