"""
Modelos de banda limitada de las singularidades de la traza.

La singularidad (t − L)_±^{−3/2} se realiza a partir de la integral de
frecuencias B(s) = ∫₀^K χ(r/K) r^{1/2} e^{−isr} dr con s = t − L; el pico
del toro usa S_ρ(t) = ∫₀^K χ(r/K) r J₀(ρr) cos(tr) dr.
"""
import math
import warnings
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.special import j0

from src.config import settings
from src.trace.prediction import Side, SingularityPrediction
from src.trace.window import WindowSpec, chi
from src.utils.errors import ConfigError, QuadratureFailure

QUAD_LIMIT = 400
SIDE_NORM = math.sqrt(2.0) * math.sqrt(math.pi) / 2.0  # √2·Γ(3/2)


def _integrate(f: Callable[[float], float], a: float, b: float, weight: str, omega: float, epsabs: float) -> float:
    """∫_a^b f(r)·w(ωr) dr con w ∈ {cos, sin}; cuadratura simple si ω = 0."""
    if omega == 0.0:
        if weight == "sin":
            return 0.0
        kwargs = {}
    else:
        kwargs = {"weight": weight, "wvar": omega}
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            value, _ = quad(f, a, b, epsabs=epsabs, epsrel=settings.quad_tol, limit=QUAD_LIMIT, **kwargs)
        except IntegrationWarning as e:
            raise QuadratureFailure(f"Cuadratura sin convergencia en [{a}, {b}] con ω={omega}: {e}") from e
    return float(value)


def frequency_integral(s: float, K: float) -> complex:
    """
    B(s) = ∫₀^K χ(r/K) r^{1/2} e^{−isr} dr.

    Se parte en [0, K/2] (χ = 1) y [K/2, K] (caída cos²).
    """
    epsabs = settings.quad_tol * K**1.5
    plateau = math.sqrt
    rolloff = lambda r: chi(r / K) * math.sqrt(r)  # noqa: E731
    re = _integrate(plateau, 0.0, 0.5 * K, "cos", s, epsabs) + _integrate(rolloff, 0.5 * K, K, "cos", s, epsabs)
    im = _integrate(plateau, 0.0, 0.5 * K, "sin", s, epsabs) + _integrate(rolloff, 0.5 * K, K, "sin", s, epsabs)
    return complex(re, -im)


def singularity_shape(L: float, side: Side, window: WindowSpec, grid: Sequence[float]) -> np.ndarray:
    """
    Perfil de coeficiente unidad de (t − L)_±^{−3/2} con corte χ(r/K).

    plus = −(Re B + Im B)/(√2Γ(3/2)), minus = (Im B − Re B)/(√2Γ(3/2)).
    """
    if side not in ("plus", "minus"):
        raise ConfigError(f"Lado desconocido: {side!r}")
    out = np.empty(len(grid))
    for i, t in enumerate(grid):
        B = frequency_integral(float(t) - L, window.K)
        if side == "plus":
            out[i] = -(B.real + B.imag) / SIDE_NORM
        else:
            out[i] = (B.imag - B.real) / SIDE_NORM
    return out


def bandlimited_model(
    prediction: SingularityPrediction,
    window: WindowSpec,
    grid: Sequence[float],
) -> np.ndarray:
    """
    Traza modelo en la malla: coeficiente de traza (trace_scale·C) por el
    perfil de (t − L)_±^{−3/2} de banda limitada.

    Raises:
        QuadratureFailure: si la cuadratura adaptativa no alcanza la tolerancia
    """
    return prediction.trace_coefficient * singularity_shape(prediction.L, prediction.side, window, grid)


def poisson_shape(rho: float, window: WindowSpec, grid: Sequence[float]) -> np.ndarray:
    """
    S_ρ(t) = ∫₀^K χ(r/K) r J₀(ρr) cos(tr) dr, término de la suma de Poisson del toro.

    T_χ(t) = |T²|/(2π) Σ_d e^{−id·A₀} S_{|d|}(t) sobre los vectores d de la red.
    """
    K = window.K
    epsabs = settings.quad_tol * K**2
    plateau = lambda r: r * j0(rho * r)  # noqa: E731
    rolloff = lambda r: chi(r / K) * r * j0(rho * r)  # noqa: E731
    out = np.empty(len(grid))
    for i, t in enumerate(grid):
        t = abs(float(t))
        out[i] = _integrate(plateau, 0.0, 0.5 * K, "cos", t, epsabs) + _integrate(
            rolloff, 0.5 * K, K, "cos", t, epsabs
        )
    return out
