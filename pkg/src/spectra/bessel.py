"""
Funciones de Bessel de orden real y sus ceros.

La evaluación usa scipy.special (jv / yv) dentro de rangos validados;
la serie ascendente en log-gamma sirve de oráculo independiente.
"""
import math
from typing import Optional, Union

import numpy as np
from scipy.optimize import brentq
from scipy.special import gammaln, jv, yv

from src.config import settings
from src.utils.errors import ConvergenceFailure, DomainError
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

ArrayLike = Union[float, np.ndarray]

SCAN_STEP = 0.5
MAX_REFINEMENTS = 4


def _check_domain(nu: float, x: ArrayLike, allow_zero: bool = True) -> None:
    if not 0.0 <= nu <= settings.bessel_nu_max:
        raise DomainError(f"Orden ν={nu} fuera de [0, {settings.bessel_nu_max}]")
    x_arr = np.asarray(x, dtype=float)
    lower_ok = np.all(x_arr >= 0.0) if allow_zero else np.all(x_arr > 0.0)
    if not lower_ok or np.any(x_arr > settings.bessel_x_max) or np.any(~np.isfinite(x_arr)):
        raise DomainError(f"Argumento fuera de [0, {settings.bessel_x_max}] para ν={nu}")


def bessel_j(nu: float, x: ArrayLike) -> ArrayLike:
    """
    J_ν(x) para ν >= 0 y x >= 0 dentro del rango validado.

    Raises:
        DomainError: fuera de [0, ν_max] × [0, x_max]

    Example:
        >>> bessel_j(0.0, 0.0)   # 1.0
    """
    _check_domain(nu, x)
    return jv(nu, x)


def bessel_y(nu: float, x: ArrayLike) -> ArrayLike:
    """Y_ν(x) para x > 0 (compañera de segunda especie, usada en el anillo)."""
    _check_domain(nu, x, allow_zero=False)
    return yv(nu, x)


def bessel_j_series(nu: float, x: float, max_terms: int = 400) -> float:
    """
    Serie ascendente Σ (−1)^k (x/2)^{2k+ν} / (k! Γ(k+ν+1)).

    Los términos se calculan en escala logarítmica y se suman con
    math.fsum; es fiable para x <= max(12, ν).
    """
    if x == 0.0:
        return 1.0 if nu == 0.0 else 0.0
    log_half = math.log(x / 2.0)
    terms = []
    for k in range(max_terms):
        log_term = (2 * k + nu) * log_half - gammaln(k + 1) - gammaln(k + nu + 1)
        term = math.exp(log_term)
        terms.append(-term if k % 2 else term)
        if k > x and term < 1e-18 * abs(terms[0]):
            break
    return math.fsum(terms)


def _scan_zeros(nu: float, k_max: float, step: float) -> np.ndarray:
    grid = np.arange(nu, k_max, step)
    grid = np.append(grid, k_max) if grid.size == 0 or grid[-1] < k_max else grid
    values = jv(nu, grid)
    zeros = []
    for i in range(len(grid) - 1):
        a, b = grid[i], grid[i + 1]
        fa, fb = values[i], values[i + 1]
        if fa == 0.0 and a > 0.0:
            zeros.append(a)
        elif fa * fb < 0.0:
            zeros.append(brentq(lambda s: jv(nu, s), a, b, xtol=settings.zero_xtol, rtol=4 * np.finfo(float).eps))
    if values[-1] == 0.0 and grid[-1] > 0.0:
        zeros.append(grid[-1])
    return np.array(zeros)


def bessel_j_zeros(nu: float, k_max: float, step: Optional[float] = None) -> np.ndarray:
    """
    Todos los ceros positivos de J_ν en (0, k_max], en orden ascendente.

    Se barre desde x = ν (j_{ν,1} > ν) con paso <= 0.5, menor que la
    separación mínima entre ceros consecutivos, y cada cambio de signo se
    refina con brentq. El conteo se contrasta con un barrido a paso mitad;
    si difiere se refina la malla.

    Args:
        nu: Orden (>= 0)
        k_max: Cota superior
        step: Paso de barrido (por defecto 0.5)

    Returns:
        Array de ceros

    Raises:
        DomainError: fuera del rango validado
        ConvergenceFailure: si el conteo no se estabiliza

    Example:
        >>> bessel_j_zeros(0.5, 10.0)   # π, 2π, 3π
    """
    _check_domain(nu, k_max)
    if k_max <= nu:
        return np.array([])
    step = SCAN_STEP if step is None else step

    zeros = _scan_zeros(nu, k_max, step)
    for _ in range(MAX_REFINEMENTS):
        check = _scan_zeros(nu, k_max, step / 2.0)
        if len(check) == len(zeros):
            return zeros
        logger.warning(
            f"Conteo de ceros inestable para ν={nu:.6f}: {len(zeros)} vs {len(check)}; refinando"
        )
        step /= 2.0
        zeros = check
    raise ConvergenceFailure(f"El conteo de ceros de J_{nu} no se estabiliza hasta k={k_max}")


def zeros_interlace(lower: np.ndarray, upper: np.ndarray) -> bool:
    """
    Entrelazado j_{ν,n} < j_{ν+1,n} < j_{ν,n+1} entre ceros de órdenes ν y ν+1.

    ``lower`` son los ceros de J_ν y ``upper`` los de J_{ν+1} hasta la misma cota.
    """
    n = len(upper)
    if n > len(lower) or len(lower) > n + 1:
        return False
    for i in range(n):
        if not lower[i] < upper[i]:
            return False
        if i + 1 < len(lower) and not upper[i] < lower[i + 1]:
            return False
    return True


def mcmahon_count(nu: float, k_max: float) -> int:
    """
    Número de ceros de J_ν en (0, k_max] según la aproximación de McMahon
    j_{ν,n} ≈ (n + ν/2 − 1/4)π, útil como control grueso para ν pequeño.
    """
    return max(0, int(math.floor(k_max / math.pi - nu / 2.0 + 0.25)))
