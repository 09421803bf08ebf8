"""
Espectro de longitudes de órbitas periódicas del billar circular.
"""
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from src.billiards.geometry import Geometry
from src.config import settings
from src.utils.errors import ConfigError
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

MERGE_TOL = 1e-12


@dataclass
class LengthSpectrum:
    """
    Longitudes periódicas ordenadas con multiplicidad y familias.

    ``table`` tiene columnas (length, multiplicity, families); ``obstacle_bounds``
    lista intervalos (k, lo, hi) donde pueden caer órbitas que tocan el
    obstáculo k veces; ``accumulation`` son los límites 2πqR.
    """

    geometry: Geometry
    L_max: float
    table: pd.DataFrame
    obstacle_bounds: List[Tuple[int, float, float]] = field(default_factory=list)
    accumulation: List[float] = field(default_factory=list)

    @property
    def lengths(self) -> np.ndarray:
        return self.table["length"].to_numpy()

    def __len__(self) -> int:
        return len(self.table)

    def to_frame(self) -> pd.DataFrame:
        return self.table.copy()


def _star_polygon_lengths(g: Geometry, L_max: float, n_max: int) -> List[Tuple[float, str]]:
    """Polígonos estrella (N, q) primitivos y sus recorridos repetidos; etiqueta "N/q" o "N/qxk"."""
    R = g.R
    out: List[Tuple[float, str]] = []
    for N in range(2, n_max + 1):
        for q in range(1, N // 2 + 1):
            if math.gcd(N, q) != 1:
                continue
            if g.has_obstacle and R * math.cos(math.pi * q / N) <= g.r0:
                continue
            base = 2.0 * N * R * math.sin(math.pi * q / N)
            k = 1
            while k * base <= L_max + MERGE_TOL:
                label = f"{N}/{q}" if k == 1 else f"{N}/{q}x{k}"
                out.append((k * base, label))
                k += 1
    return out


def orbit_family_lengths(
    g: Geometry, L_max: float, n_max: int
) -> Tuple[List[Tuple[float, str]], List[Tuple[int, float, float]]]:
    """
    Longitudes por familia, sin fusionar.

    Returns:
        (familias, cotas): pares (longitud, etiqueta) de polígonos estrella y
        rebotes radiales; y para cada k la terna (k, 2k(R−r0), 2k(R+r0)) de las
        órbitas que tocan el obstáculo (vacía sin obstáculo)
    """
    families = _star_polygon_lengths(g, L_max, n_max)
    bounds: List[Tuple[int, float, float]] = []
    if g.has_obstacle:
        radial = 2.0 * (g.R - g.r0)
        k = 1
        while k * radial <= L_max + MERGE_TOL:
            families.append((k * radial, f"radial x{k}" if k > 1 else "radial"))
            bounds.append((k, k * radial, 2.0 * k * (g.R + g.r0)))
            k += 1
    return families, bounds


def accumulation_points(g: Geometry, L_max: float) -> List[float]:
    """Límites de galería susurrante 2πqR (q = 1, 2, ...) hasta L_max."""
    step = 2.0 * math.pi * g.R
    return [q * step for q in range(1, int(L_max // step) + 1)]


def length_spectrum(
    g: Geometry,
    L_max: float,
    n_max: Optional[int] = None,
) -> LengthSpectrum:
    """
    Enumera las longitudes de órbitas periódicas hasta L_max.

    Sin obstáculo: 2NR sin(πq/N) para polígonos (N, q) con N <= n_max,
    incluidos los diámetros (N=2) y los recorridos repetidos. Con obstáculo
    solo cuentan las cuerdas que no lo cortan (R cos(πq/N) > r0), se agregan
    los rebotes radiales 2k(R−r0) y los intervalos 2k(R−r0) < L < 2k(R+r0)
    de las familias que tocan el obstáculo.

    Args:
        g: Geometría
        L_max: Longitud máxima
        n_max: Máximo número de lados (por defecto settings.ngon_max)

    Returns:
        LengthSpectrum ordenado, con longitudes iguales a 1e−12 fusionadas

    Example:
        >>> spec = length_spectrum(Geometry(1.0), 6.0)
        >>> spec.lengths[:3]   # 4, 3√3, 4√2
    """
    if not L_max > 0:
        raise ConfigError(f"L_max debe ser positivo (recibido {L_max})")
    n_max = settings.ngon_max if n_max is None else n_max

    raw, bounds = orbit_family_lengths(g, L_max, n_max)
    raw.sort(key=lambda item: item[0])
    rows = []
    for length, label in raw:
        if rows and abs(length - rows[-1]["length"]) <= MERGE_TOL * max(1.0, length):
            rows[-1]["multiplicity"] += 1
            rows[-1]["families"] += f";{label}"
        else:
            rows.append({"length": length, "multiplicity": 1, "families": label})

    table = pd.DataFrame(rows, columns=["length", "multiplicity", "families"])
    logger.debug(f"Espectro de longitudes: {len(table)} valores distintos hasta L={L_max}")
    return LengthSpectrum(
        geometry=g,
        L_max=float(L_max),
        table=table,
        obstacle_bounds=bounds,
        accumulation=accumulation_points(g, L_max),
    )
