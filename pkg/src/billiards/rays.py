"""
Trazado exacto de rayos reflejados en el disco o el anillo circular.
"""
import math
from dataclasses import dataclass, field
from typing import List, Literal, Optional, Sequence, Tuple, Union

import numpy as np

from src.billiards.geometry import Geometry, UnitDirection
from src.config import settings
from src.utils.errors import ConfigError, InnerHit, TangentialHit
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

Boundary = Literal["outer", "inner"]
DirectionLike = Union[UnitDirection, Sequence[float], np.ndarray]

MAX_REFLECTIONS = 1_000_000


@dataclass(frozen=True, eq=False)
class ReflectionEvent:
    """Reflexión en la frontera: tiempo, punto, direcciones entrante/saliente."""

    time: float
    point: np.ndarray
    incoming: np.ndarray
    outgoing: np.ndarray
    boundary: Boundary = "outer"


def _as_direction(eta: DirectionLike) -> UnitDirection:
    return eta if isinstance(eta, UnitDirection) else UnitDirection(np.asarray(eta, dtype=float))


def reflect_direction(
    eta: DirectionLike,
    p: Sequence[float],
    tol: Optional[float] = None,
) -> UnitDirection:
    """
    Ley de reflexión η − 2(ν·η)ν en un punto de una frontera circular.

    La normal se toma radial (p/|p|); el signo de ν no afecta a la fórmula,
    por lo que sirve igual para el círculo exterior y el obstáculo.

    Args:
        eta: Dirección entrante
        p: Punto de la frontera
        tol: Tolerancia de tangencia (por defecto settings.tangency_tol)

    Returns:
        Dirección reflejada

    Raises:
        TangentialHit: si |η·ν| < tol
    """
    eta = _as_direction(eta)
    p = np.asarray(p, dtype=float)
    tol = settings.tangency_tol if tol is None else tol
    nu = p / math.hypot(p[0], p[1])
    dot = float(eta.vec @ nu)
    if abs(dot) < tol:
        raise TangentialHit(f"Impacto tangencial en p={p}: |η·ν|={abs(dot):.3e} < {tol:.1e}")
    return UnitDirection(eta.vec - 2.0 * dot * nu)


@dataclass(eq=False)
class ReflectedRayPath:
    """
    Trayectoria lineal a trozos t ↦ (x(t), ξ(t)) con reflexiones especulares.

    Los segmentos empiezan en ``segment_times[i]`` en ``segment_points[i]``
    con dirección ``segment_directions[i]``; el segmento 0 parte de z.
    """

    z: np.ndarray
    eta: UnitDirection
    t_max: float
    geometry: Geometry
    events: List[ReflectionEvent] = field(default_factory=list)
    segment_times: np.ndarray = field(default=None)
    segment_points: np.ndarray = field(default=None)
    segment_directions: np.ndarray = field(default=None)

    @property
    def chord(self) -> float:
        """Parámetro de cuerda w = z·η⊥."""
        return float(self.z @ self.eta.perp)

    @property
    def v(self) -> float:
        """Coordenada longitudinal v = z·η (z = vη + wη⊥)."""
        return float(self.z @ self.eta.vec)

    @property
    def reflection_times(self) -> np.ndarray:
        return np.array([e.time for e in self.events])

    @property
    def n_segments(self) -> int:
        return len(self.segment_times)

    def segment_index(self, t: float) -> int:
        """Índice del segmento que contiene t (a la derecha en las reflexiones)."""
        if t < 0.0 or t > self.t_max * (1.0 + 1e-14) + 1e-14:
            raise ConfigError(f"t={t} fuera del dominio [0, {self.t_max}] de la trayectoria")
        idx = int(np.searchsorted(self.segment_times, t, side="right")) - 1
        return max(idx, 0)

    def position(self, t: float) -> np.ndarray:
        i = self.segment_index(t)
        return self.segment_points[i] + (t - self.segment_times[i]) * self.segment_directions[i]

    def direction(self, t: float) -> np.ndarray:
        return self.segment_directions[self.segment_index(t)].copy()

    def reflections_before(self, t: float) -> int:
        """Número de reflexiones con tiempo <= t."""
        return int(np.searchsorted(self.reflection_times, t, side="right"))

    def nearest_reflection_gap(self, t: float) -> float:
        if not self.events:
            return math.inf
        return float(np.min(np.abs(self.reflection_times - t)))

    def chord_invariants(self) -> np.ndarray:
        """|x·ξ⊥| por segmento (constante a lo largo de la trayectoria)."""
        pts, dirs = self.segment_points, self.segment_directions
        return np.abs(pts[:, 0] * dirs[:, 1] - pts[:, 1] * dirs[:, 0])

    def polyline(self, t0: float = 0.0, t1: Optional[float] = None) -> np.ndarray:
        """Vértices de la subtrayectoria entre t0 y t1 (incluye extremos)."""
        t1 = self.t_max if t1 is None else t1
        inner = [e.point for e in self.events if t0 < e.time < t1]
        return np.vstack([self.position(t0), *inner, self.position(t1)])


def trace_ray(
    z: Sequence[float],
    eta: DirectionLike,
    t_max: float,
    g: Geometry,
    forbid_inner: bool = False,
    tol: Optional[float] = None,
) -> ReflectedRayPath:
    """
    Traza el rayo desde z en la dirección η durante un tiempo t_max.

    Las intersecciones con los círculos se calculan con la forma estable
    de la fórmula cuadrática; cada punto de impacto se reproyecta sobre su
    círculo para que el invariante de cuerda no derive.

    Args:
        z: Punto inicial, estrictamente dentro del dominio
        eta: Dirección inicial
        t_max: Tiempo total (= longitud recorrida)
        g: Geometría
        forbid_inner: Si True, un impacto con el obstáculo lanza InnerHit
        tol: Tolerancia de tangencia

    Returns:
        ReflectedRayPath con todos los eventos de reflexión

    Example:
        >>> path = trace_ray([0, 0.5], [1, 0], 3 * math.sqrt(3), Geometry(1.0))
        >>> len(path.events)   # 3
    """
    z = np.asarray(z, dtype=float).reshape(2)
    eta = _as_direction(eta)
    if not t_max > 0:
        raise ConfigError(f"t_max debe ser positivo (recibido {t_max})")
    if not g.contains(z):
        raise ConfigError(f"El punto inicial {z} no está dentro del dominio {g}")

    R, r0 = g.R, g.r0
    x = z.copy()
    e = eta.vec.copy()
    t = 0.0
    events: List[ReflectionEvent] = []
    times, points, dirs = [0.0], [x.copy()], [e.copy()]

    while True:
        b = float(x @ e)
        c_out = float(x @ x) - R * R
        disc = max(b * b - c_out, 0.0)
        root = math.sqrt(disc)
        s = -b + root if b <= 0.0 else -c_out / (b + root)
        boundary: Boundary = "outer"

        if g.has_obstacle and b < 0.0:
            c_in = float(x @ x) - r0 * r0
            disc_in = b * b - c_in
            if disc_in > 0.0:
                s_in = c_in / (-b + math.sqrt(disc_in))
                if 0.0 < s_in < s:
                    s, boundary = s_in, "inner"

        if t + s >= t_max:
            break

        p = x + s * e
        radius = r0 if boundary == "inner" else R
        p *= radius / math.hypot(p[0], p[1])

        if boundary == "inner" and forbid_inner:
            raise InnerHit(f"El rayo alcanza el obstáculo r0={r0} en t={t + s:.6f}")

        e_new = reflect_direction(e, p, tol).vec
        t += s
        events.append(ReflectionEvent(t, p.copy(), e.copy(), e_new.copy(), boundary))
        times.append(t)
        points.append(p.copy())
        dirs.append(e_new.copy())
        x, e = p, e_new

        if len(events) > MAX_REFLECTIONS:
            raise ConfigError(f"Demasiadas reflexiones (> {MAX_REFLECTIONS}) para t_max={t_max}")

    return ReflectedRayPath(
        z=z,
        eta=eta,
        t_max=float(t_max),
        geometry=g,
        events=events,
        segment_times=np.array(times),
        segment_points=np.array(points),
        segment_directions=np.array(dirs),
    )


def flow_map(
    z: Sequence[float],
    eta_vec: Sequence[float],
    t: float,
    g: Geometry,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Flujo reflejado (x, ξ) en tiempo t con la extensión homogénea en η.

    x es homogénea de grado 0 en η y ξ de grado 1: para |η| ≠ 1 se traza la
    dirección η/|η| y ξ se reescala por |η|.
    """
    eta_vec = np.asarray(eta_vec, dtype=float)
    scale = math.hypot(eta_vec[0], eta_vec[1])
    if t <= 0.0:
        return np.asarray(z, dtype=float).copy(), eta_vec.copy()
    path = trace_ray(z, eta_vec / scale, t, g)
    i = path.n_segments - 1
    x = path.segment_points[i] + (t - path.segment_times[i]) * path.segment_directions[i]
    return x, scale * path.segment_directions[i]
