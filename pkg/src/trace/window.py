"""
Ventana espectral χ y mallas temporales.
"""
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from src.utils.errors import ConfigError

ArrayLike = Union[float, np.ndarray]


def chi(s: ArrayLike) -> ArrayLike:
    """χ(s) = 1 para s <= ½, cos²(π(s − ½)) en [½, 1], 0 para s >= 1 (clase C¹)."""
    s = np.asarray(s, dtype=float)
    out = np.where(s <= 0.5, 1.0, np.cos(math.pi * (s - 0.5)) ** 2)
    out = np.where(s >= 1.0, 0.0, out)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class WindowSpec:
    """Corte en frecuencia χ(k/K)."""

    K: float

    def __post_init__(self):
        if not self.K > 0:
            raise ConfigError(f"La frecuencia de corte debe ser positiva (K={self.K})")

    def weights(self, k: ArrayLike) -> ArrayLike:
        return chi(np.asarray(k, dtype=float) / self.K)

    @property
    def plateau(self) -> float:
        """Frecuencia hasta la que χ = 1."""
        return 0.5 * self.K

    @property
    def max_spacing(self) -> float:
        """Espaciado temporal máximo π/(4K)."""
        return math.pi / (4.0 * self.K)


def time_grid(t_start: float, t_stop: float, K: float) -> np.ndarray:
    """
    Malla uniforme en [t_start, t_stop] con espaciado <= π/(4K).

    Los extremos se incluyen siempre.
    """
    if not t_stop > t_start:
        raise ConfigError(f"Intervalo temporal vacío: [{t_start}, {t_stop}]")
    n = int(math.ceil((t_stop - t_start) / (math.pi / (4.0 * K))))
    return np.linspace(t_start, t_stop, n + 1)
