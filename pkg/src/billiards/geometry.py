"""
Tipos geométricos básicos: direcciones unitarias, dominio circular y
órbitas poligonales inscritas.
"""
import math
from dataclasses import dataclass, field
from typing import Literal, Tuple

import numpy as np

from src.utils.errors import ConfigError

Orientation = Literal["ccw", "cw"]


@dataclass(frozen=True, eq=False)
class UnitDirection:
    """
    Dirección unitaria η en el plano, normalizada al construirse.

    ``perp`` es η⊥ = (η₂, −η₁).
    """

    vec: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vec, dtype=float).reshape(2)
        norm = math.hypot(v[0], v[1])
        if norm == 0.0 or not math.isfinite(norm):
            raise ConfigError(f"Dirección no normalizable: {v}")
        object.__setattr__(self, "vec", v / norm)

    @classmethod
    def from_angle(cls, phi: float) -> "UnitDirection":
        return cls(np.array([math.cos(phi), math.sin(phi)]))

    @property
    def perp(self) -> np.ndarray:
        return np.array([self.vec[1], -self.vec[0]])

    def __array__(self, dtype=None, copy=None):
        return self.vec if dtype is None else self.vec.astype(dtype)


@dataclass(frozen=True)
class Geometry:
    """Disco de radio R con obstáculo circular concéntrico de radio r0 (0 = punción)."""

    R: float = 1.0
    r0: float = 0.0

    def __post_init__(self):
        if not (self.R > 0 and 0.0 <= self.r0 < self.R):
            raise ConfigError(f"Geometría inválida: se requiere 0 <= r0 < R (R={self.R}, r0={self.r0})")

    @property
    def has_obstacle(self) -> bool:
        return self.r0 > 0.0

    def contains(self, x: np.ndarray) -> bool:
        """True si x está estrictamente dentro del dominio."""
        rho = math.hypot(x[0], x[1])
        return self.r0 < rho < self.R if self.has_obstacle else rho < self.R


@dataclass(frozen=True)
class OrbitSpec:
    """
    Órbita periódica regular de N lados inscrita en el círculo |x| = R.

    Attributes:
        N: Número de lados (>= 2)
        R: Radio exterior
        orientation: "ccw" (antihorario) o "cw" (horario)
        theta0: Ángulo polar del primer vértice
    """

    N: int
    R: float = 1.0
    orientation: Orientation = "ccw"
    theta0: float = 0.0
    z: np.ndarray = field(default=None, compare=False, repr=False)
    eta: UnitDirection = field(default=None, compare=False, repr=False)

    @property
    def side_length(self) -> float:
        """h_N = 2R sin(π/N)."""
        return 2.0 * self.R * math.sin(math.pi / self.N)

    @property
    def length(self) -> float:
        """L_N = N·h_N."""
        return self.N * self.side_length

    @property
    def chord_distance(self) -> float:
        """|w| = R cos(π/N), distancia del centro a cada lado."""
        return 0.0 if self.N == 2 else self.R * math.cos(math.pi / self.N)

    @property
    def vertices(self) -> np.ndarray:
        angles = self.theta0 + 2.0 * math.pi * np.arange(self.N) / self.N
        return self.R * np.column_stack([np.cos(angles), np.sin(angles)])

    @property
    def curvature_gain(self) -> float:
        """Factor 4N/h_N del bloque c del marco al cerrar la órbita."""
        return 4.0 * self.N / self.side_length


def ngon_orbit(
    N: int,
    R: float = 1.0,
    theta0: float = 0.0,
    orientation: Orientation = "ccw",
) -> Tuple[OrbitSpec, np.ndarray, UnitDirection]:
    """
    Construye la órbita N-gonal y un representante (z, η) que la realiza.

    El punto z es el punto medio del lado entre los vértices θ₀ y
    θ₀ + 2π/N; η recorre ese lado en la orientación pedida, de modo que
    w = z·η⊥ = +R cos(π/N) para "ccw" y −R cos(π/N) para "cw".

    Args:
        N: Número de lados (>= 2)
        R: Radio del círculo
        theta0: Ángulo del primer vértice
        orientation: "ccw" o "cw"

    Returns:
        (OrbitSpec, z, η)

    Example:
        >>> spec, z, eta = ngon_orbit(3, 1.0, math.pi / 6, "cw")
        >>> z, eta.vec   # (0, 1/2), (1, 0)
    """
    if N < 2:
        raise ConfigError(f"Una órbita poligonal requiere N >= 2 (recibido {N})")
    if orientation not in ("ccw", "cw"):
        raise ConfigError(f"Orientación desconocida: {orientation}")

    mid = theta0 + math.pi / N
    chord = 0.0 if N == 2 else R * math.cos(math.pi / N)
    z = chord * np.array([math.cos(mid), math.sin(mid)])
    direction = np.array([-math.sin(mid), math.cos(mid)])
    if orientation == "cw":
        direction = -direction
    eta = UnitDirection(direction)

    spec = OrbitSpec(N=N, R=R, orientation=orientation, theta0=theta0, z=z, eta=eta)
    return spec, z, eta
