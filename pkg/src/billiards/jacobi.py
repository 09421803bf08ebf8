"""
Linealización simpléctica (marco de Jacobi) del flujo de billar reflejado.

Las derivadas se obtienen por diferencias centradas del mapa exacto
(z, η) ↦ (x(t), ξ(t)) con un nivel de extrapolación de Richardson.
"""
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy.optimize import brentq

from src.billiards.rays import ReflectedRayPath, flow_map
from src.config import settings
from src.utils.errors import ReflectionAdjacent
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

IDENTITY = np.eye(2)


@dataclass(frozen=True, eq=False)
class JacobiFrame:
    """
    Bloques 2×2 del marco F(t) = [[a, b], [c, d]].

    a = ∂x/∂z, b = ∂x/∂η, c = ∂ξ/∂z, d = ∂ξ/∂η.
    """

    t: float
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    @property
    def F(self) -> np.ndarray:
        return np.block([[self.a, self.b], [self.c, self.d]])

    @property
    def Z(self) -> np.ndarray:
        """Z = a + ib."""
        return self.a + 1j * self.b

    def symplectic_defects(self) -> Dict[str, float]:
        """Normas de aᵗc − cᵗa, bᵗd − dᵗb y aᵗd − cᵗb − I."""
        a, b, c, d = self.a, self.b, self.c, self.d
        return {
            "ac_sym": float(np.linalg.norm(a.T @ c - c.T @ a)),
            "bd_sym": float(np.linalg.norm(b.T @ d - d.T @ b)),
            "ad_cb": float(np.linalg.norm(a.T @ d - c.T @ b - IDENTITY)),
        }

    @property
    def max_symplectic_defect(self) -> float:
        """Mayor de los tres defectos simplécticos."""
        return max(self.symplectic_defects().values())


def _jacobian(path: ReflectedRayPath, t: float, h: float) -> np.ndarray:
    """Jacobiano 4×4 de (x, ξ) respecto de (z₁, z₂, η₁, η₂) por diferencias centradas."""
    base = np.concatenate([path.z, path.eta.vec])
    g = path.geometry
    J = np.empty((4, 4))
    for k in range(4):
        step = np.zeros(4)
        step[k] = h
        xp, sp = flow_map((base + step)[:2], (base + step)[2:], t, g)
        xm, sm = flow_map((base - step)[:2], (base - step)[2:], t, g)
        J[:, k] = np.concatenate([xp - xm, sp - sm]) / (2.0 * h)
    return J


def frame_at(
    path: ReflectedRayPath,
    t: float,
    h: Optional[float] = None,
    gap: Optional[float] = None,
) -> JacobiFrame:
    """
    Evalúa el marco de Jacobi en el tiempo t.

    Args:
        path: Trayectoria de referencia (da z, η y la geometría)
        t: Tiempo de evaluación
        h: Paso de diferencias finitas (por defecto settings.fd_step)
        gap: Distancia mínima a una reflexión (por defecto settings.reflection_gap)

    Returns:
        JacobiFrame en t

    Raises:
        ReflectionAdjacent: si t está a menos de ``gap`` de una reflexión

    Example:
        >>> spec, z, eta = ngon_orbit(3)
        >>> path = trace_ray(z, eta, spec.length, Geometry(1.0))
        >>> frame_at(path, spec.length).c   # 4√3 P_{η⊥}
    """
    h = settings.fd_step if h is None else h
    gap = settings.reflection_gap if gap is None else gap
    distance = path.nearest_reflection_gap(t)
    if distance < gap:
        raise ReflectionAdjacent(
            f"t={t:.9f} está a {distance:.2e} de una reflexión (mínimo {gap:.1e})"
        )

    J = (4.0 * _jacobian(path, t, h / 2.0) - _jacobian(path, t, h)) / 3.0
    return JacobiFrame(t=float(t), a=J[:2, :2], b=J[:2, 2:], c=J[2:, :2], d=J[2:, 2:])


def free_flight_frame(eta: np.ndarray, t: float) -> JacobiFrame:
    """Marco exacto antes de la primera reflexión: a=I, b=t(I−P_η), c=0, d=I."""
    eta = np.asarray(eta, dtype=float)
    P = np.outer(eta, eta)
    return JacobiFrame(t=t, a=IDENTITY.copy(), b=t * (IDENTITY - P), c=np.zeros((2, 2)), d=IDENTITY.copy())


def closure_frame(eta: np.ndarray, N: int, R: float, v: float = 0.0) -> JacobiFrame:
    """
    Forma cerrada del marco al completar una vuelta de la órbita N-gonal.

    Con κ = 4N/h_N y P = P_{η⊥}: a = I + κvP, b = −κv²P, c = κP, d = I − κvP.
    Para v = 0 se reduce a a = I, b = 0, c = κP, d = I.
    """
    eta = np.asarray(eta, dtype=float)
    perp = np.array([eta[1], -eta[0]])
    P = np.outer(perp, perp)
    kappa = 4.0 * N / (2.0 * R * math.sin(math.pi / N))
    return JacobiFrame(
        t=float(N * 2.0 * R * math.sin(math.pi / N)),
        a=IDENTITY + kappa * v * P,
        b=-kappa * v * v * P,
        c=kappa * P,
        d=IDENTITY - kappa * v * P,
    )


def focal_times(
    path: ReflectedRayPath,
    sampler: Optional[Callable[[float], JacobiFrame]] = None,
    t_end: Optional[float] = None,
    xtol: float = 1e-10,
) -> List[float]:
    """
    Tiempos focales (det a(t) = 0) en [0, t_end].

    En cada segmento recto c es de rango uno (ξ·c = 0), así que det a(t)
    es afín en t: dos muestras interiores por segmento bastan para detectar
    la raíz, que luego se refina con brentq cuando queda en la zona evaluable.

    Args:
        path: Trayectoria (típicamente una órbita N-gonal cerrada)
        sampler: Función t ↦ JacobiFrame (por defecto frame_at(path, t))
        t_end: Extremo del intervalo (por defecto path.t_max)
        xtol: Tolerancia de refinamiento

    Returns:
        Lista ordenada de tiempos focales
    """
    sampler = sampler or (lambda s: frame_at(path, s))
    t_end = path.t_max if t_end is None else t_end
    gap = 2.0 * settings.reflection_gap

    bounds = list(path.segment_times) + [path.t_max]
    roots: List[float] = []
    for t0, t1 in zip(bounds[:-1], bounds[1:]):
        t1 = min(t1, t_end)
        if t1 - t0 <= 2.0 * gap:
            continue
        lo, hi = t0 + gap, t1 - gap
        if t0 == 0.0:
            lo = t0 + min(gap, 0.25 * (t1 - t0))
        if abs(t1 - path.t_max) < 1e-12:
            hi = t1

        det_lo = float(np.linalg.det(sampler(lo).a))
        det_hi = float(np.linalg.det(sampler(hi).a))
        slope = (det_hi - det_lo) / (hi - lo)
        if slope == 0.0:
            continue
        guess = lo - det_lo / slope
        if not (t0 < guess < t1):
            continue

        if det_lo * det_hi < 0.0:
            root = brentq(lambda s: float(np.linalg.det(sampler(s).a)), lo, hi, xtol=xtol)
        else:
            root = guess
        roots.append(float(root))
        logger.debug(f"Punto focal en t={root:.10f} (segmento [{t0:.4f}, {t1:.4f}])")

    return roots
