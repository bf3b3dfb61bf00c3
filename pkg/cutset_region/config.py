from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    project_name: str = "cutset-region"
    version: str = "0.1.0"
    log_level: str = Field(default="WARNING", alias="CUTSET_REGION_LOG_LEVEL")

    # Numerical tolerances
    normalization_tol: float = Field(default=1e-12, description="Allowed drift of a pmf or channel row sum from 1")
    cmi_clamp_tol: float = Field(default=1e-9, description="Negative CMI values above -tol are clamped to zero")
    dominance_slack: float = Field(default=1e-9, description="Per-coordinate slack of the dominance order")
    feasibility_tol: float = Field(default=1e-9, description="Phase-1 simplex feasibility threshold")
    certificate_tol: float = Field(default=1e-6, description="Allowed shortfall when re-checking a certificate")

    # Size caps
    max_table_entries: int = Field(default=2**24, alias="CUTSET_REGION_MAX_TABLE_ENTRIES")
    max_grid_points: int = Field(default=200_000, alias="CUTSET_REGION_MAX_GRID_POINTS")
    max_deterministic_recs: int = Field(default=1_000_000, alias="CUTSET_REGION_MAX_DETERMINISTIC_RECS")
    max_stochastic_recs: int = Field(default=200_000, alias="CUTSET_REGION_MAX_STOCHASTIC_RECS")
    simplex_max_iterations: int = Field(default=10_000, alias="CUTSET_REGION_SIMPLEX_MAX_ITERATIONS")
    max_generators: int = Field(default=1_000_000, alias="CUTSET_REGION_MAX_GENERATORS")

    # Property harness
    property_probe_points: int = Field(default=10, alias="CUTSET_REGION_PROPERTY_PROBE_POINTS")

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="CUTSET_REGION_",
        case_sensitive=False,
        env_file_encoding="utf-8",
        populate_by_name=True,
        extra="ignore",
    )


def default_grid(alphabet_size: int) -> int:
    """Grid resolution used when a problem does not name one."""
    if alphabet_size <= 2:
        return 11
    if alphabet_size == 3:
        return 5
    return 3


settings = Settings()
