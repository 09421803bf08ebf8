"""
Potenciales magnéticos de campo nulo y sus integrales de línea.
"""
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import quad

from src.billiards.geometry import Geometry, Orientation, ngon_orbit
from src.billiards.rays import ReflectedRayPath, trace_ray
from src.spectra.lattice import Lattice
from src.utils.errors import ConfigError, NonClosedPath, SingularGauge
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

CLOSURE_TOL = 1e-10


class GaugeField(ABC):
    """Potencial vectorial A(x) con rotacional nulo en el dominio."""

    @abstractmethod
    def potential(self, x: Sequence[float]) -> np.ndarray:
        """A(x) como vector real de dimensión 2."""

    @abstractmethod
    def segment_integral(self, p0: np.ndarray, p1: np.ndarray) -> float:
        """∫ A·dx sobre el segmento recto p0 → p1."""

    def line_integral(self, points: np.ndarray) -> float:
        """∫ A·dx sobre una poligonal (suma por segmentos en orden fijo)."""
        points = np.asarray(points, dtype=float)
        return math.fsum(
            self.segment_integral(points[i], points[i + 1]) for i in range(len(points) - 1)
        )

    def curl(self, x: Sequence[float], h: float = 1e-6) -> float:
        """∂₁A₂ − ∂₂A₁ por diferencias centradas."""
        x = np.asarray(x, dtype=float)
        ex, ey = np.array([h, 0.0]), np.array([0.0, h])
        dA2_dx1 = (self.potential(x + ex)[1] - self.potential(x - ex)[1]) / (2 * h)
        dA1_dx2 = (self.potential(x + ey)[0] - self.potential(x - ey)[0]) / (2 * h)
        return float(dA2_dx1 - dA1_dx2)


@dataclass(frozen=True, eq=False)
class IdealFlux(GaugeField):
    """
    Flujo de Aharonov–Bohm α concentrado en ``center``.

    A(x) = (α/2π)·(−y₂, y₁)/|y|² con y = x − center, de modo que A·dx = (α/2π) dθ.
    """

    alpha: float
    center: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def potential(self, x: Sequence[float]) -> np.ndarray:
        y = np.asarray(x, dtype=float) - self.center
        r2 = float(y @ y)
        if r2 == 0.0:
            raise SingularGauge(f"A no está definido en el centro {self.center}")
        return (self.alpha / (2.0 * math.pi)) * np.array([-y[1], y[0]]) / r2

    def segment_integral(self, p0: np.ndarray, p1: np.ndarray) -> float:
        y0 = np.asarray(p0, dtype=float) - self.center
        y1 = np.asarray(p1, dtype=float) - self.center
        cross = y0[0] * y1[1] - y0[1] * y1[0]
        dot = float(y0 @ y1)
        seg = y1 - y0
        seg_len = math.hypot(seg[0], seg[1])
        if seg_len > 0.0:
            # distancia del centro al segmento
            s = min(max(-float(y0 @ seg) / seg_len**2, 0.0), 1.0)
            closest = y0 + s * seg
            if math.hypot(closest[0], closest[1]) < 1e-12:
                raise SingularGauge(f"El segmento {p0} → {p1} pasa por el flujo en {self.center}")
        return (self.alpha / (2.0 * math.pi)) * math.atan2(cross, dot)


@dataclass(frozen=True, eq=False)
class ConstantOnTorus(GaugeField):
    """Potencial constante A₀ en el toro ℝ²/L."""

    A0: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A0", np.asarray(self.A0, dtype=float).reshape(2))

    def potential(self, x: Sequence[float]) -> np.ndarray:
        return self.A0.copy()

    def segment_integral(self, p0: np.ndarray, p1: np.ndarray) -> float:
        return float(self.A0 @ (np.asarray(p1, dtype=float) - np.asarray(p0, dtype=float)))


@dataclass(frozen=True, eq=False)
class FourierPeriodic(GaugeField):
    """
    Potencial L-periódico A(x) = Σ_δ A_δ e^{2πiδ·x}, δ = n₁e₁* + n₂e₂*.

    ``coefficients`` mapea (n₁, n₂) al vector complejo A_δ; (0, 0) es la
    parte constante. Debe cumplir A_{−δ} = conj(A_δ) para que A sea real.
    """

    lattice: Lattice
    coefficients: Dict[Tuple[int, int], np.ndarray]

    def __post_init__(self):
        coeffs = {
            (int(k[0]), int(k[1])): np.asarray(v, dtype=complex).reshape(2)
            for k, v in self.coefficients.items()
        }
        for (n1, n2), value in coeffs.items():
            partner = coeffs.get((-n1, -n2))
            if partner is None or not np.allclose(partner, np.conj(value), atol=1e-14):
                raise ConfigError(f"Coeficientes no hermíticos en δ=({n1}, {n2}): A no sería real")
        object.__setattr__(self, "coefficients", dict(sorted(coeffs.items())))

    def dual_vectors(self) -> Dict[Tuple[int, int], np.ndarray]:
        return {n: self.lattice.dual_vector(n) for n in self.coefficients}

    def potential(self, x: Sequence[float]) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        total = np.zeros(2, dtype=complex)
        for n, value in self.coefficients.items():
            delta = self.lattice.dual_vector(n)
            total += value * np.exp(2j * math.pi * float(delta @ x))
        return total.real

    def max_curl_coefficient(self) -> float:
        """max |δ₂A₁ − δ₁A₂| sobre los modos: cero si y solo si el campo es nulo."""
        worst = 0.0
        for n, value in self.coefficients.items():
            delta = self.lattice.dual_vector(n)
            worst = max(worst, abs(delta[1] * value[0] - delta[0] * value[1]))
        return worst

    def segment_integral(self, p0: np.ndarray, p1: np.ndarray) -> float:
        p0 = np.asarray(p0, dtype=float)
        step = np.asarray(p1, dtype=float) - p0
        value, _ = quad(lambda s: float(self.potential(p0 + s * step) @ step), 0.0, 1.0,
                        epsabs=1e-10, epsrel=1e-10, limit=200)
        return value


def _closed_polyline(path: Union[ReflectedRayPath, np.ndarray]) -> np.ndarray:
    points = path.polyline() if isinstance(path, ReflectedRayPath) else np.asarray(path, dtype=float)
    gap = float(np.linalg.norm(points[-1] - points[0]))
    if gap > CLOSURE_TOL:
        raise NonClosedPath(f"La trayectoria no cierra: |x(T) − x(0)| = {gap:.3e}")
    return points


def holonomy(gauge: GaugeField, path: Union[ReflectedRayPath, np.ndarray]) -> float:
    """
    Flujo α_γ = ∮ A·dx a lo largo de una curva cerrada.

    Args:
        gauge: Potencial
        path: ReflectedRayPath cerrada o poligonal (primer punto = último)

    Returns:
        Flujo real; cambia de signo al invertir la orientación

    Raises:
        NonClosedPath: si la curva no cierra a 1e−10
    """
    return gauge.line_integral(_closed_polyline(path))


def orbit_path(N: int, R: float = 1.0, theta0: float = 0.0, orientation: Orientation = "ccw") -> ReflectedRayPath:
    """Traza una vuelta completa de la órbita N-gonal."""
    spec, z, eta = ngon_orbit(N, R, theta0, orientation)
    return trace_ray(z, eta, spec.length, Geometry(R))


def flux_factor(gauge: GaugeField, N: int, R: float = 1.0, theta0: float = 0.0) -> complex:
    """
    K(L) = e^{iα(ccw)} + e^{iα(cw)} para el par de orientaciones de la órbita.

    Como α(cw) = −α(ccw), el resultado es 2 cos α_γ.
    """
    alpha_ccw = holonomy(gauge, orbit_path(N, R, theta0, "ccw"))
    alpha_cw = holonomy(gauge, orbit_path(N, R, theta0, "cw"))
    value = complex(np.exp(1j * alpha_ccw) + np.exp(1j * alpha_cw))
    logger.debug(f"K(L) N={N}: α+={alpha_ccw:.6f}, α−={alpha_cw:.6f}, K={value:.6f}")
    return value
