"""
Haces gaussianos a lo largo de un rayo reflejado: matriz de fase M,
rama continua de det(a+ib), holonomía del potencial y amplitud a₀.
"""
import cmath
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.beams.gauge import GaugeField
from src.billiards.jacobi import JacobiFrame, frame_at
from src.billiards.rays import ReflectedRayPath
from src.config import settings
from src.utils.errors import ConfigError, FocalPoint, ReflectionAdjacent
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

FOCAL_TOL = 1e-12
MAX_ARG_STEP = math.pi / 2


@dataclass(frozen=True, eq=False)
class BeamState:
    """
    Estado del haz en el tiempo t.

    Attributes:
        t: Tiempo
        x: Posición sobre el rayo
        xi: Dirección del rayo
        Z: a + ib
        M: (c + id)(a + ib)^{-1}, simetrizada
        theta_det: Argumento continuo de det Z (no reducido módulo 2π)
        k: Número de reflexiones en (0, t]
        h: Holonomía ∫₀ᵗ A(x(s))·ẋ(s) ds
    """

    t: float
    x: np.ndarray
    xi: np.ndarray
    Z: np.ndarray
    M: np.ndarray
    theta_det: float = 0.0
    k: int = 0
    h: float = 0.0

    @property
    def det_Z(self) -> complex:
        return complex(np.linalg.det(self.Z))

    @property
    def sqrt_det_Z(self) -> complex:
        """(det Z)^{1/2} sobre la rama seguida continuamente."""
        return math.sqrt(abs(self.det_Z)) * cmath.exp(0.5j * self.theta_det)

    def im_M_eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.M.imag)


def _phase_matrix(frame: JacobiFrame) -> np.ndarray:
    Z = frame.Z
    M = (frame.c + 1j * frame.d) @ np.linalg.inv(Z)
    return 0.5 * (M + M.T)


def initial_beam(z: Sequence[float], eta: Sequence[float]) -> BeamState:
    """
    Haz inicial con fase x·η + (i/2)|x − z|²: Z = I, M = iI, θ = 0.
    """
    eta = np.asarray(eta, dtype=float)
    return BeamState(
        t=0.0,
        x=np.asarray(z, dtype=float).copy(),
        xi=eta / np.linalg.norm(eta),
        Z=np.eye(2, dtype=complex),
        M=1j * np.eye(2),
    )


def _segment_samples(path: ReflectedRayPath, seg: int) -> Tuple[float, complex, float, complex]:
    """
    Dos muestras interiores de det Z en el segmento ``seg``.

    Se evitan las reflexiones en ambos extremos; el modelo afín resultante
    cubre todo el segmento.
    """
    gap = 1.5 * settings.reflection_gap
    s0 = float(path.segment_times[seg])
    s1 = float(path.segment_times[seg + 1]) if seg + 1 < path.n_segments else path.t_max
    lo = s0 + (gap if seg > 0 else 0.0)
    hi = s1 - (gap if seg + 1 < path.n_segments else 0.0)
    if hi - lo < 1e-6:
        raise ReflectionAdjacent(f"Segmento [{s0:.6f}, {s1:.6f}] demasiado corto para muestrear det Z")
    det_lo = complex(np.linalg.det(frame_at(path, lo).Z))
    det_hi = complex(np.linalg.det(frame_at(path, hi).Z))
    return lo, det_lo, hi, det_hi


def _affine_arg_change(t_a: float, t_b: float, model) -> float:
    """
    Variación continua de arg D(t) de t_a a t_b con pasos |Δarg| < π/2.

    El número de pasos se duplica hasta que todos los incrementos
    principales quedan por debajo del umbral.
    """
    if t_b <= t_a:
        return 0.0
    n = 8
    while True:
        grid = np.linspace(t_a, t_b, n + 1)
        values = np.array([model(s) for s in grid])
        if np.any(np.abs(values) < FOCAL_TOL):
            raise FocalPoint(f"det Z se anula entre t={t_a:.6f} y t={t_b:.6f}")
        steps = np.angle(values[1:] / values[:-1])
        if np.all(np.abs(steps) < MAX_ARG_STEP) or n > 1 << 16:
            return float(math.fsum(steps))
        n *= 2


def evolve_beam(
    state: BeamState,
    path: ReflectedRayPath,
    t: float,
    gauge: Optional[GaugeField] = None,
) -> BeamState:
    """
    Propaga el haz desde state.t hasta t a lo largo de ``path``.

    Entre reflexiones el argumento de det Z se continúa sobre el modelo
    afín de cada segmento; en cada reflexión θ aumenta en π (la raíz
    cuadrada se multiplica por i). La holonomía se acumula con integrales
    de línea exactas sobre los segmentos.

    Args:
        state: Estado de partida (típicamente initial_beam)
        path: Trayectoria con el mismo (z, η) que el estado inicial
        t: Tiempo destino (>= state.t)
        gauge: Potencial opcional para la holonomía

    Returns:
        Nuevo BeamState en t

    Raises:
        FocalPoint: si det Z = 0 en t
        ReflectionAdjacent: si t está demasiado cerca de una reflexión

    Example:
        >>> path = trace_ray(z, eta, L, Geometry(1.0))
        >>> state = evolve_beam(initial_beam(z, eta.vec), path, L)
        >>> state.theta_det / math.pi   # 6 para el triángulo
    """
    if t < state.t:
        raise ConfigError(f"No se puede propagar hacia atrás: t={t} < {state.t}")
    if t > path.t_max * (1.0 + 1e-14) + 1e-14:
        raise ConfigError(f"t={t} excede la trayectoria (t_max={path.t_max})")

    theta = state.theta_det
    first = path.segment_index(state.t)
    last = path.segment_index(t)
    reflections = 0

    for seg in range(first, last + 1):
        if seg > first:
            theta += math.pi
            reflections += 1
        s0 = max(float(path.segment_times[seg]), state.t)
        s1 = float(path.segment_times[seg + 1]) if seg < last else t
        lo, d_lo, hi, d_hi = _segment_samples(path, seg)
        slope = (d_hi - d_lo) / (hi - lo)
        theta += _affine_arg_change(s0, s1, lambda s: d_lo + (s - lo) * slope)

    frame = frame_at(path, t)
    det_Z = complex(np.linalg.det(frame.Z))
    if abs(det_Z) < FOCAL_TOL:
        raise FocalPoint(f"det Z = {det_Z:.3e} en t={t:.9f}")
    # el argumento exacto del marco fija θ dentro de la rama continua
    theta += cmath.phase(det_Z / cmath.exp(1j * theta))

    h = state.h
    if gauge is not None and t > state.t:
        h += gauge.line_integral(path.polyline(state.t, t))

    return BeamState(
        t=float(t),
        x=path.position(t),
        xi=path.direction(t),
        Z=frame.Z,
        M=_phase_matrix(frame),
        theta_det=theta,
        k=state.k + reflections,
        h=h,
    )


def amplitude_a0(state: BeamState) -> complex:
    """
    Amplitud principal a₀ = (−i)^k |det Z|^{−1/2} e^{−iθ/2} e^{ih}.

    Con k = 3 el factor (−i)³ = i reproduce la amplitud tras tres
    reflexiones; cada reflexión aporta el signo −1 de Dirichlet.

    Raises:
        FocalPoint: si det Z = 0
    """
    det_abs = abs(state.det_Z)
    if det_abs < FOCAL_TOL:
        raise FocalPoint(f"a₀ no está definida en el punto focal t={state.t:.9f}")
    return complex(
        (-1j) ** state.k
        * det_abs ** -0.5
        * cmath.exp(-0.5j * state.theta_det)
        * cmath.exp(1j * state.h)
    )


def beam_winding(path: ReflectedRayPath, times: Sequence[float]) -> pd.DataFrame:
    """
    Historial de θ_det en los tiempos pedidos (ordenados).

    Returns:
        DataFrame con columnas t, theta_det, reflections, det_re, det_im
    """
    times = sorted(float(s) for s in times)
    state = initial_beam(path.z, path.eta.vec)
    rows = []
    for s in times:
        state = evolve_beam(state, path, s)
        rows.append(
            {
                "t": s,
                "theta_det": state.theta_det,
                "reflections": state.k,
                "det_re": state.det_Z.real,
                "det_im": state.det_Z.imag,
            }
        )
    return pd.DataFrame(rows)


def with_holonomy(state: BeamState, h: float) -> BeamState:
    """Copia del estado con otra holonomía (para barridos de flujo)."""
    return replace(state, h=h)
