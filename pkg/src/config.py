"""
Configuración centralizada del laboratorio.
Carga variables de entorno y valida tolerancias numéricas.
"""
from pathlib import Path
from typing import Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Configuración global con validación (valores por defecto, .env y entorno)."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # === Aplicación ===
    app_env: Literal["development", "production"] = "development"
    debug: bool = False
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"
    log_to_file: bool = False

    # === Paths ===
    base_dir: Path = Field(default_factory=lambda: Path(__file__).parent.parent)
    output_dir: Path = Field(default_factory=lambda: Path(__file__).parent.parent / "output")
    logs_dir: Path = Field(default_factory=lambda: Path(__file__).parent.parent / "logs")

    # === Billares y marcos de Jacobi ===
    tangency_tol: float = Field(1e-9, description="Tolerancia sobre |η·ν| en reflexiones")
    reflection_gap: float = Field(
        1e-3, description="Distancia mínima a una reflexión para evaluar el marco"
    )
    fd_step: float = Field(1e-5, description="Paso de diferencias finitas en (z, η)")
    ngon_max: int = Field(40, description="Máximo N al enumerar longitudes periódicas")

    # === Bessel y espectros ===
    bessel_nu_max: float = 400.0
    bessel_x_max: float = 400.0
    zero_xtol: float = Field(1e-13, description="Tolerancia absoluta de brentq en ceros")

    # === Traza y ajuste ===
    quad_tol: float = Field(1e-9, description="Tolerancia de cuadratura adaptativa")
    fit_half_width: float = 0.3
    background_degree: int = 1

    # === Paralelismo ===
    threads: int = 1

    @field_validator(
        "tangency_tol",
        "reflection_gap",
        "fd_step",
        "bessel_nu_max",
        "bessel_x_max",
        "zero_xtol",
        "quad_tol",
        "fit_half_width",
    )
    @classmethod
    def validate_positive(cls, v: float) -> float:
        """Valida que tolerancias, pasos y límites sean positivos."""
        if v <= 0:
            raise ValueError(f"El valor debe ser positivo (recibido {v})")
        return v

    @field_validator("threads", "ngon_max")
    @classmethod
    def validate_count(cls, v: int) -> int:
        """Valida contadores enteros."""
        if v < 1:
            raise ValueError(f"El contador debe ser >= 1 (recibido {v})")
        return v

    @field_validator("background_degree")
    @classmethod
    def validate_degree(cls, v: int) -> int:
        """El fondo polinomial admite grado 0 a 4."""
        if not 0 <= v <= 4:
            raise ValueError(f"Grado de fondo fuera de rango [0, 4]: {v}")
        return v

    def __init__(self, **kwargs):
        """Inicializa y crea directorios necesarios."""
        super().__init__(**kwargs)
        self._create_directories()

    def _create_directories(self) -> None:
        """Crea directorios necesarios si no existen."""
        for directory in [self.output_dir, self.logs_dir]:
            directory.mkdir(parents=True, exist_ok=True)


# Singleton de configuración
settings = Settings()
