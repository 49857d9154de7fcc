"""Configuration settings for orbiflop."""

from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Library and CLI settings loaded from environment variables.

    Every field can be overridden with an ``ORBIFLOP_`` prefixed variable
    or a ``.env`` file; CLI flags take precedence for a single run.
    """

    app_name: str = "orbiflop"
    app_version: str = "1.0.0"

    # Resolution solver
    max_kappa: int = Field(
        default=20,
        ge=1,
        description="Largest number of singular points enumerated over 2^kappa sign patterns"
    )
    oracle_trials: int = Field(default=1000, ge=0, description="Random kernel combinations per oracle run")
    oracle_coefficient_bound: int = Field(
        default=7,
        ge=1,
        description="Kernel combination coefficients are drawn from [-bound, bound]"
    )

    # Exact algebra
    series_order: int = Field(default=50, ge=0, description="Truncation order for series oracles")

    # Geometry certification
    default_seed: int = Field(default=0, ge=0, description="Seed used when none is given")
    default_count: int = Field(default=1000, ge=1, description="Sample count per certification")
    tol_eq: float = Field(default=1e-9, gt=0, description="Equation residual tolerance")
    tol_grad: float = Field(default=1e-6, gt=0, description="Gradient finite-difference tolerance")
    rank_tol: float = Field(default=1e-8, gt=0, description="Singular value threshold for Jacobian rank")
    pairing_floor: float = Field(default=1e-8, gt=0, description="Lower bound for |omega(grad F1, grad F2)|")
    invariance_tol: float = Field(default=1e-12, gt=0, description="mu_r invariance tolerance for F")
    fd_step: float = Field(default=1e-5, gt=0, description="Central finite-difference step")
    sample_box: float = Field(default=1.5, gt=0, description="Half-width of the (x3, y3) sampling box")
    rejection_budget: int = Field(default=10000, ge=1, description="Rejection attempts per sample")

    # Logging
    log_level: str = Field(default="INFO", description="Logging level")

    model_config = {
        "env_prefix": "ORBIFLOP_",
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "extra": "ignore",
    }


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
