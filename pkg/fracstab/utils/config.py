"""Environment configuration handling for Fracstab.

Manages numerical tuning knobs via environment variables.
"""

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class NumericsConfig:
    """Tuning knobs for series evaluation, constant estimation and sweeps."""

    ml_max_terms: int
    m_grid_points: int
    m1_grid_points: int
    m2_samples: int
    workers: int

    @classmethod
    def from_env(cls) -> "NumericsConfig":
        """Create numerics config from environment variables."""
        return cls(
            ml_max_terms=int(os.getenv("FRACSTAB_ML_MAX_TERMS", "1000")),
            m_grid_points=int(os.getenv("FRACSTAB_M_GRID_POINTS", "200")),
            m1_grid_points=int(os.getenv("FRACSTAB_M1_GRID_POINTS", "10001")),
            m2_samples=int(os.getenv("FRACSTAB_M2_SAMPLES", "4096")),
            workers=int(os.getenv("FRACSTAB_WORKERS", "1")),
        )


def get_numerics_config() -> NumericsConfig:
    """Get the current numerics configuration."""
    return NumericsConfig.from_env()


# Default configuration instance
DEFAULT_NUMERICS_CONFIG = NumericsConfig(
    ml_max_terms=1000,
    m_grid_points=200,
    m1_grid_points=10001,
    m2_samples=4096,
    workers=1,
)
