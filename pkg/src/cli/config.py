"""
Configuración de experimentos: archivo TOML + flags de línea de comandos.

Ejemplo de archivo::

    kind = "disk"
    alpha = ["0", "pi/3", "pi/2"]
    K = 80
    ngon = 3

    [geometry]
    R = 1.0

    [torus]
    e1 = [1.0, 0.0]
    e2 = [0.31, 1.07]
"""
import json
import math
import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.config import settings
from src.utils.errors import ConfigError

ProblemKind = Literal["disk", "annulus", "torus"]

_ANGLE = re.compile(r"^([+-]?)\s*(\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d*\.?\d+))?$")


def parse_angle(value: Any) -> float:
    """
    Convierte un ángulo en radianes: número, "pi", "-pi/4", "2pi/3", "0.5*pi".

    Raises:
        ValueError: si el texto no es un ángulo reconocible
    """
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip().lower().replace("π", "pi")
    match = _ANGLE.match(text)
    if match:
        sign, factor, divisor = match.groups()
        angle = (float(factor) if factor else 1.0) * math.pi / (float(divisor) if divisor else 1.0)
        return -angle if sign == "-" else angle
    try:
        return float(text)
    except ValueError as e:
        raise ValueError(f"Ángulo no reconocido: {value!r}") from e


def parse_sweep(value: Any) -> List[float]:
    """Lista de ángulos desde lista, escalar o texto separado por comas."""
    if isinstance(value, (list, tuple)):
        return [parse_angle(v) for v in value]
    if isinstance(value, str) and "," in value:
        return [parse_angle(v) for v in value.split(",") if v.strip()]
    return [parse_angle(value)]


class GeometryConfig(BaseModel):
    """Disco de radio R con obstáculo opcional de radio r0."""

    model_config = ConfigDict(extra="forbid")

    R: float = 1.0
    r0: float = 0.0

    @model_validator(mode="after")
    def check_radii(self) -> "GeometryConfig":
        if not self.R > 0:
            raise ValueError(f"R debe ser positivo (recibido {self.R})")
        if not 0.0 <= self.r0 < self.R:
            raise ValueError(f"Se requiere 0 <= r0 < R (r0={self.r0}, R={self.R})")
        return self


class TorusConfig(BaseModel):
    """Red del toro, potencial constante y barrido de A₀·e₁."""

    model_config = ConfigDict(extra="forbid")

    e1: Tuple[float, float] = (1.0, 0.0)
    e2: Tuple[float, float] = (0.31, 1.07)
    A0: Tuple[float, float] = (0.0, 0.0)
    sweep: List[float] = Field(default_factory=lambda: [0.0, math.pi / 3, math.pi / 2, math.pi])
    peaks: List[Tuple[int, int]] = Field(default_factory=lambda: [(1, 0)])
    genericity_bound: float = 10.0
    half_width: float = 0.1

    @field_validator("sweep", mode="before")
    @classmethod
    def parse_sweep_angles(cls, v: Any) -> List[float]:
        return parse_sweep(v)

    @model_validator(mode="after")
    def check_lattice(self) -> "TorusConfig":
        det = self.e1[0] * self.e2[1] - self.e1[1] * self.e2[0]
        if abs(det) < 1e-12:
            raise ValueError(f"Vectores de red linealmente dependientes: {self.e1}, {self.e2}")
        if any(tuple(p) == (0, 0) for p in self.peaks):
            raise ValueError("Los picos del toro requieren d ≠ 0")
        return self


class ExperimentConfig(BaseModel):
    """
    Configuración completa y validada de un experimento.

    ``alpha`` es el barrido de flujo (su primer valor se usa en los comandos
    de un solo flujo). La ventana de ajuste se elige automáticamente si
    ``half_width`` es None.
    """

    model_config = ConfigDict(extra="forbid")

    kind: ProblemKind = "disk"
    geometry: GeometryConfig = Field(default_factory=GeometryConfig)
    torus: TorusConfig = Field(default_factory=TorusConfig)
    alpha: List[float] = Field(default_factory=lambda: [0.0])
    K: float = 80.0
    ngon: int = 3
    half_width: Optional[float] = None
    degree: int = Field(default_factory=lambda: settings.background_degree)
    t_start: Optional[float] = None
    t_stop: Optional[float] = None
    L_max: float = 8.0
    out: Path = Field(default_factory=lambda: settings.output_dir)
    threads: int = Field(default_factory=lambda: settings.threads)

    @field_validator("alpha", mode="before")
    @classmethod
    def parse_alpha(cls, v: Any) -> List[float]:
        return parse_sweep(v)

    @model_validator(mode="after")
    def check_preconditions(self) -> "ExperimentConfig":
        if not self.alpha:
            raise ValueError("El barrido de flujo está vacío")
        if not self.K > 0:
            raise ValueError(f"K debe ser positivo (recibido {self.K})")
        if self.ngon < 2:
            raise ValueError(f"ngon debe ser >= 2 (recibido {self.ngon})")
        if self.half_width is not None and not 0.0 < self.half_width <= 0.35:
            raise ValueError(f"half_width debe estar en (0, 0.35] (recibido {self.half_width})")
        if not 0 <= self.degree <= 4:
            raise ValueError(f"degree fuera de [0, 4]: {self.degree}")
        if self.threads < 1:
            raise ValueError(f"threads debe ser >= 1 (recibido {self.threads})")
        if self.kind == "annulus" and self.geometry.r0 <= 0.0:
            raise ValueError("El anillo requiere r0 > 0")
        if self.kind == "disk" and self.geometry.r0 != 0.0:
            raise ValueError("El disco requiere r0 = 0 (use kind = 'annulus')")
        if self.t_start is not None and self.t_stop is not None and not self.t_stop > self.t_start:
            raise ValueError(f"Intervalo temporal vacío: [{self.t_start}, {self.t_stop}]")
        return self

    def resolved(self) -> Dict[str, Any]:
        """Diccionario JSON-serializable con todos los valores efectivos."""
        return self.model_dump(mode="json")

    def provenance(self) -> Dict[str, Any]:
        """Configuración incrustada en los CSV: sin los ajustes de ejecución (threads, out)."""
        return self.model_dump(mode="json", exclude={"threads", "out"})

    def to_json(self) -> str:
        return json.dumps(self.resolved(), indent=2, sort_keys=True)


def read_toml(path: Path) -> Dict[str, Any]:
    """Lee el archivo de configuración TOML."""
    try:
        with open(path, "rb") as f:
            return tomllib.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"Archivo de configuración no encontrado: {path}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"TOML inválido en {path}: {e}") from e


def load_config(path: Optional[Path] = None, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """
    Construye la configuración: valores por defecto < archivo < flags.

    Args:
        path: Archivo TOML opcional
        overrides: Valores de línea de comandos (los None se ignoran)

    Returns:
        ExperimentConfig validada

    Raises:
        ConfigError: si el archivo o algún valor es inválido
    """
    data: Dict[str, Any] = read_toml(Path(path)) if path is not None else {}
    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value
    try:
        return ExperimentConfig(**data)
    except ValidationError as e:
        raise ConfigError(f"Configuración inválida: {e}") from e
