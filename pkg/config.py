from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field
from pathlib import Path


class Settings(BaseSettings):
    # Project paths
    PROJECT_ROOT: Path = Path(__file__).parent
    LOGS_DIR: Path = PROJECT_ROOT / "logs"

    # Application settings
    APP_NAME: str = "Ferrers Dimension Toolkit"
    APP_VERSION: str = "1.0.0"

    # Monitoring and Logging
    LOG_LEVEL: str = Field(default="WARNING", description="Logging level for the stderr sink")
    LOG_TO_FILE: bool = Field(default=False, description="Also write rotating log files to LOGS_DIR")

    # Exhaustive search budgets
    BUDGET_PERM: int = Field(default=7, gt=0, description="Max rows/cols for exhaustive ordering search")
    BUDGET_ZEROS: int = Field(default=20, gt=0, description="Max number of zeros for the dimension oracle")
    D_MAX: int = Field(default=4, gt=0, description="Largest Ferrers dimension the oracle tries")
    ENUMERATION_MAX_SIDE: int = Field(default=4, gt=0, description="Max m, n for canonical enumeration")

    # Workers and randomness
    JOBS: int = Field(default=1, gt=0, description="Worker processes for oracle searches")
    SEED: int = Field(default=20240917, description="Default seed for randomized runs")
    RANDOM_SAMPLES: int = Field(default=0, ge=0, description="Random chain-triple instances checked by cross-validate")
    RANDOM_MAX_SIDE: int = Field(default=50, gt=0, description="Largest side of random instances")

    model_config = SettingsConfigDict(
        env_prefix="FERRERS_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )


# Singleton instance
settings = Settings()
