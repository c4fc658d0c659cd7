"""
Configurações do motor usando Pydantic Settings
"""

from fractions import Fraction

from pydantic import ConfigDict, Field, field_validator
from pydantic_settings import BaseSettings

from app.exceptions import ConfigurationError


class Settings(BaseSettings):
    """Configurações do motor"""

    # Identificação
    engine_name: str = Field(default="zeta-gap-engine", alias="ENGINE_NAME")
    engine_version: str = Field(default="0.2.0", alias="ENGINE_VERSION")

    # Logging
    debug: bool = Field(default=False, alias="DEBUG")
    log_level: str = Field(default="INFO", alias="LOG_LEVEL")
    log_to_file: bool = Field(default=False, alias="LOG_TO_FILE")
    log_dir: str = Field(default="logs", alias="LOG_DIR")

    # Série do critério
    default_r: int = Field(default=2, alias="GAP_R")
    default_eta: str = Field(default="1/2", alias="GAP_ETA")
    default_poly: str = Field(default="1", alias="GAP_POLY")
    truncation_j: int = Field(default=80, alias="GAP_J")
    precision_bits: int = Field(default=256, alias="GAP_PRECISION")

    # Varredura de λ_r (scan_max em múltiplos de π)
    scan_max_pi: float = Field(default=4.0, alias="GAP_SCAN_MAX_PI")
    grid_points: int = Field(default=512, alias="GAP_GRID_POINTS")
    bisection_bits: int = Field(default=60, alias="GAP_BISECTION_BITS")

    # Otimizador
    seed: int = Field(default=0, alias="GAP_SEED")
    optimizer_budget: int = Field(default=2000, alias="OPTIMIZER_BUDGET")
    optimizer_restarts: int = Field(default=8, alias="OPTIMIZER_RESTARTS")

    # Aritmética
    sieve_limit: int = Field(default=10_000_000, alias="SIEVE_LIMIT")
    euler_cutoff: int = Field(default=1_000_000, alias="EULER_CUTOFF")
    euler_method: str = Field(default="accelerated", alias="EULER_METHOD")

    # Cache de integrais exatas
    integral_cache_size: int = Field(default=200_000, alias="INTEGRAL_CACHE_SIZE")

    model_config = ConfigDict(
        env_file="config.env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        populate_by_name=True,
        env_ignore_empty=True,
    )

    @field_validator("precision_bits")
    @classmethod
    def _check_precision(cls, value: int) -> int:
        if value < 64:
            raise ConfigurationError("GAP_PRECISION deve ser ≥ 64 bits", {"precision_bits": value})
        return value

    @field_validator("euler_method")
    @classmethod
    def _check_euler_method(cls, value: str) -> str:
        if value not in ("accelerated", "partial"):
            raise ConfigurationError("EULER_METHOD deve ser 'accelerated' ou 'partial'", {"euler_method": value})
        return value

    @property
    def eta(self) -> Fraction:
        """η padrão como racional exato"""
        return Fraction(self.default_eta)


# Instância global das configurações
settings = Settings()
