"""
Espectro exacto del disco y del anillo con flujo de Aharonov–Bohm.

H = (i∇ + A)² con condiciones de Dirichlet; la separación de variables da
canales angulares m con orden de Bessel ν = |m + α/2π|.
"""
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from joblib import Parallel, delayed
from scipy.optimize import brentq
from scipy.special import jv, yv

from src.config import settings
from src.spectra.bessel import _check_domain, bessel_j_zeros
from src.spectra.spectrum import DISK_COLUMNS, Spectrum
from src.utils.errors import ConfigError, ConvergenceFailure
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

NU_MARGIN = 10.0


@dataclass(frozen=True)
class DiskFluxProblem:
    """
    Disco (r0 = 0) o anillo (0 < r0 < R) con flujo α en el origen.

    El potencial escalar V no está soportado: solo V ≡ 0.
    """

    R: float = 1.0
    r0: float = 0.0
    alpha: float = 0.0
    V: Optional[object] = None

    def __post_init__(self):
        if not (self.R > 0 and 0.0 <= self.r0 < self.R):
            raise ConfigError(f"Se requiere 0 <= r0 < R (R={self.R}, r0={self.r0})")
        if self.V is not None:
            raise ConfigError("Solo se admite V ≡ 0")
        if not math.isfinite(self.alpha):
            raise ConfigError(f"Flujo no finito: {self.alpha}")

    @property
    def area(self) -> float:
        return math.pi * (self.R**2 - self.r0**2)

    @property
    def perimeter(self) -> float:
        return 2.0 * math.pi * (self.R + self.r0)

    def params(self) -> Dict[str, float]:
        return {"R": self.R, "r0": self.r0, "alpha": self.alpha}


def flux_channels(alpha: float, nu_max: float) -> List[Tuple[int, float]]:
    """
    Canales (m, ν) con ν = |m + α/2π| <= nu_max.

    La parte fraccionaria f₀ = remainder(α/2π, 1) ∈ [−½, ½] fija los órdenes
    ν = |s + f₀|; m = s − n con n = α/2π − f₀ entero. Así α y −α producen
    exactamente los mismos órdenes.
    """
    beta = alpha / (2.0 * math.pi)
    f0 = math.remainder(beta, 1.0)
    shift = int(round(beta - f0))
    s_max = int(math.floor(nu_max + abs(f0))) + 1
    channels = []
    for s in range(-s_max, s_max + 1):
        nu = abs(s + f0)
        if nu <= nu_max:
            channels.append((s - shift, nu))
    return channels


def weyl_count(problem: DiskFluxProblem, K: float, boundary_term: bool = True) -> float:
    """Área·K²/(4π) − Perímetro·K/(4π) (término de frontera opcional)."""
    count = problem.area * K * K / (4.0 * math.pi)
    if boundary_term:
        count -= problem.perimeter * K / (4.0 * math.pi)
    return count


def _collect(
    problem: DiskFluxProblem,
    K: float,
    zero_finder,
    threads: int,
    kind: str,
) -> Spectrum:
    kR = K * problem.R
    channels = flux_channels(problem.alpha, kR + NU_MARGIN)
    unique_nus = sorted({nu for _, nu in channels})

    logger.info(
        f"Espectro {kind}: α={problem.alpha:.6f}, K={K}, {len(channels)} canales "
        f"({len(unique_nus)} órdenes distintos)"
    )
    results = Parallel(n_jobs=threads, prefer="threads")(
        delayed(zero_finder)(nu) for nu in unique_nus
    )
    zeros_by_nu = dict(zip(unique_nus, results))

    rows = []
    for m, nu in channels:
        for n, k in enumerate(zeros_by_nu[nu], start=1):
            if k <= K:
                rows.append({"lambda": k * k, "k": k, "m": m, "nu": nu, "n": n})

    spectrum = Spectrum.from_rows(
        rows,
        DISK_COLUMNS,
        ["lambda", "m", "n"],
        cutoff=K,
        complete=True,
        kind=kind,
        params={**problem.params(), "K": K},
    )
    logger.info(f"✓ {len(spectrum):,} autovalores por debajo de K²={K * K:g}")
    return spectrum


def disk_flux_spectrum(problem: DiskFluxProblem, K: float, threads: Optional[int] = None) -> Spectrum:
    """
    Autovalores λ = (j_{ν,n}/R)² <= K² del disco con flujo.

    Args:
        problem: Problema con r0 = 0
        K: Frecuencia de corte
        threads: Hilos para la búsqueda de ceros por canal

    Returns:
        Spectrum con columnas (lambda, k, m, nu, n)

    Example:
        >>> spec = disk_flux_spectrum(DiskFluxProblem(alpha=0.0), 20.0)
        >>> spec.lambdas[0]   # j₀,₁² ≈ 5.78318596
    """
    if problem.r0 != 0.0:
        raise ConfigError("disk_flux_spectrum requiere r0 = 0; usar annulus_flux_spectrum")
    if not K > 0:
        raise ConfigError(f"K debe ser positivo (recibido {K})")
    threads = settings.threads if threads is None else threads
    R = problem.R
    return _collect(
        problem,
        K,
        lambda nu: bessel_j_zeros(nu, K * R) / R,
        threads,
        "disk",
    )


def _cross_product(nu: float, k: float, r0: float, R: float) -> float:
    """
    J_ν(k r0)Y_ν(kR) − J_ν(kR)Y_ν(k r0), con signo consistente.

    Para k r0 < ν, Y_ν(k r0) < 0 y puede desbordar; se usa la forma
    reescalada J_ν(kR) − J_ν(k r0)Y_ν(kR)/Y_ν(k r0), que es el producto
    cruzado dividido por −Y_ν(k r0) > 0.
    """
    a, b = k * r0, k * R
    if a < nu:
        y_a = yv(nu, a)
        ratio = 0.0 if math.isinf(y_a) else yv(nu, b) / y_a
        return float(jv(nu, b) - jv(nu, a) * ratio)
    return float(jv(nu, a) * yv(nu, b) - jv(nu, b) * yv(nu, a))


def _annulus_zeros_at(nu: float, K: float, r0: float, R: float, step: float) -> np.ndarray:
    start = max(nu / R, 1e-9)
    if start >= K:
        return np.array([])
    grid = np.arange(start, K, step)
    grid = np.append(grid, K) if grid[-1] < K else grid
    values = np.array([_cross_product(nu, k, r0, R) for k in grid])
    zeros = []
    for i in range(len(grid) - 1):
        if values[i] * values[i + 1] < 0.0:
            zeros.append(
                brentq(
                    lambda k: _cross_product(nu, k, r0, R),
                    grid[i],
                    grid[i + 1],
                    xtol=settings.zero_xtol,
                )
            )
    return np.array(zeros)


def annulus_zeros(nu: float, K: float, r0: float, R: float) -> np.ndarray:
    """
    Frecuencias k <= K con producto cruzado nulo para el orden ν.

    El barrido empieza en ν/R (no hay autovalores con kR < ν) con paso
    π/(8(R − r0)); se reduce a la mitad hasta que el conteo se estabiliza.
    """
    _check_domain(nu, K * R)
    step = math.pi / (R - r0) / 8.0
    zeros = _annulus_zeros_at(nu, K, r0, R, step)
    for _ in range(4):
        check = _annulus_zeros_at(nu, K, r0, R, step / 2.0)
        if len(check) == len(zeros):
            return zeros
        logger.warning(f"Anillo ν={nu:.6f}: conteo {len(zeros)} vs {len(check)}; refinando")
        step /= 2.0
        zeros = check
    raise ConvergenceFailure(f"Conteo de ceros del anillo inestable para ν={nu}")


def annulus_flux_spectrum(problem: DiskFluxProblem, K: float, threads: Optional[int] = None) -> Spectrum:
    """
    Autovalores del anillo r0 < |x| < R con Dirichlet en ambos círculos.

    Example:
        >>> spec = annulus_flux_spectrum(DiskFluxProblem(R=1, r0=0.5, alpha=math.pi), 30)
        >>> spec.table.query("nu == 0.5").k   # 2nπ
    """
    if not 0.0 < problem.r0 < problem.R:
        raise ConfigError(f"annulus_flux_spectrum requiere 0 < r0 < R (r0={problem.r0})")
    if not K > 0:
        raise ConfigError(f"K debe ser positivo (recibido {K})")
    threads = settings.threads if threads is None else threads
    return _collect(
        problem,
        K,
        lambda nu: annulus_zeros(nu, K, problem.r0, problem.R),
        threads,
        "annulus",
    )


def flux_spectrum(problem: DiskFluxProblem, K: float, threads: Optional[int] = None) -> Spectrum:
    """Despacha a disco o anillo según r0."""
    if problem.r0 > 0.0:
        return annulus_flux_spectrum(problem, K, threads)
    return disk_flux_spectrum(problem, K, threads)
