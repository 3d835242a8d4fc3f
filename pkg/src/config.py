"""Configuration management for ffzeta."""
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Runtime settings loaded from environment variables (prefix FFZETA_)."""

    # Logging
    log_level: str = "WARNING"
    log_file: str = ""

    # Enumeration guards
    enumeration_budget: int = 2_000_000  # max objects a single call may enumerate
    irreducible_budget: int = 10_000_000  # cap on q^max_deg for irreducible tables
    genus_max_cap: int = 8

    # Determinism / parallelism
    threads: int = 1
    factor_seed: int = 20240611

    # Analytic tolerances
    analytic_rtol: float = 1e-9
    root_tolerance: float = 1e-10
    root_max_iterations: int = 200
    central_zero_tolerance: float = 1e-12

    # Euler products
    euler_truncation: int = 12
    square_average_constant: float = 1.0

    # Non-effective constants (no values are known; 1 is a placeholder)
    couveignes_q: float = 1.0
    djk_c1: float = 1.0
    djk_c2: float = 1.0

    # Finite fields
    field_table_limit: int = 65536  # q up to which log/exp tables are built

    model_config = SettingsConfigDict(
        env_prefix="FFZETA_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )


# Global settings instance
settings = Settings()
