"""
Pesos de los picos de la traza del toro en t = |d|.

La traza de banda limitada del toro es exactamente
T_χ(t) = |T²|/(2π) Σ_d e^{−id·A₀} S_{|d|}(t); el coeficiente de S_{|d|} es
|T²|/(2π)·(e^{−id·A₀} + e^{id·A₀}) = (|T²|/π)·cos(d·A₀) si la red es genérica.
"""
import math
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd
import statsmodels.api as sm

from src.config import settings
from src.spectra.lattice import Lattice
from src.spectra.torus import lattice_genericity
from src.trace.model import poisson_shape
from src.trace.wave_trace import TraceSamples
from src.utils.errors import ConfigError, GenericityFailure, IsolationViolation
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

TORUS_HALF_WIDTH = 0.1
NEIGHBOUR_MARGIN = 0.5
LENGTH_DECIMALS = 12


def lattice_lengths(lattice: Lattice, bound: float) -> List[float]:
    """Normas distintas |d| <= bound (incluido 0), redondeadas a 1e−12."""
    norms = {round(float(np.linalg.norm(vec)), LENGTH_DECIMALS) for _, vec in lattice.enumerate(bound)}
    return sorted(norms)


def _fit_peak(
    trace: TraceSamples,
    lattice: Lattice,
    rho: float,
    half_width: float,
    degree: int,
) -> Dict[str, float]:
    lo, hi = rho - half_width, rho + half_width
    rhos = [r for r in lattice_lengths(lattice, hi + NEIGHBOUR_MARGIN) if r == 0.0 or r >= lo - NEIGHBOUR_MARGIN]
    competitors = [r for r in rhos if abs(r - rho) > 1e-9 and abs(r - rho) <= half_width]
    if competitors:
        raise IsolationViolation(f"|d'|={competitors[0]:.6f} dentro de ±{half_width} de |d|={rho:.6f}")

    samples = trace.restrict(lo, hi)
    if len(samples.t) < len(rhos) + degree + 2:
        raise ConfigError(f"Solo {len(samples.t)} puntos en la ventana del pico |d|={rho:.6f}")

    target = min(rhos, key=lambda r: abs(r - rho))
    x = (samples.t - rho) / half_width
    columns = {f"S_{r:.12f}": poisson_shape(r, trace.window, samples.t) for r in rhos}
    for p in range(degree + 1):
        columns[f"bg{p}"] = x**p
    X = pd.DataFrame(columns)
    result = sm.OLS(pd.Series(samples.values, name="trace"), X).fit()

    norm = float(np.linalg.norm(samples.values))
    return {
        "weight": float(result.params[f"S_{target:.12f}"]),
        "residual": math.sqrt(float(result.ssr)) / norm if norm > 0 else float("nan"),
        "n_points": len(samples.t),
        "n_basis": len(rhos),
    }


def torus_peak_weights(
    trace: TraceSamples,
    lattice: Lattice,
    A0: Sequence[float],
    d_list: Iterable[Sequence[int]],
    half_width: float = TORUS_HALF_WIDTH,
    genericity_bound: Optional[float] = None,
    degree: Optional[int] = None,
) -> pd.DataFrame:
    """
    Ajusta el peso de S_{|d|} en la traza alrededor de t = |d|.

    La base incluye S_0, S_ρ para las normas ρ de la red a menos de 0.5 de la
    ventana y un polinomio de fondo que absorbe las colas lejanas.

    Args:
        trace: Traza de banda limitada del toro
        lattice: Red L
        A0: Potencial constante
        d_list: Índices (m1, m2) de los vectores d = m1 e1 + m2 e2
        half_width: Semiancho de la ventana de ajuste
        genericity_bound: Cota de la verificación de genericidad (por defecto max |d|)
        degree: Grado del fondo (por defecto settings.background_degree)

    Returns:
        DataFrame (m1, m2, length, alpha_d, cos_alpha, weight, normalized_weight, residual)

    Raises:
        GenericityFailure: si la red no es genérica hasta la cota
        IsolationViolation: si otra norma de la red cae en la ventana
    """
    A0 = np.asarray(A0, dtype=float)
    degree = settings.background_degree if degree is None else degree
    indices = [tuple(int(v) for v in m) for m in d_list]
    if not indices or any(m == (0, 0) for m in indices):
        raise ConfigError("La lista de vectores d debe ser no vacía y sin d = 0")

    lengths = [float(np.linalg.norm(lattice.vector(m))) for m in indices]
    bound = max(lengths) if genericity_bound is None else genericity_bound
    report = lattice_genericity(lattice, bound)
    if not report.passed:
        raise GenericityFailure(f"Red no genérica hasta {bound}: testigo {report.witness}")

    scale = lattice.cell_area / math.pi
    rows = []
    for m, rho in zip(indices, lengths):
        alpha_d = float(lattice.vector(m) @ A0)
        fit = _fit_peak(trace, lattice, rho, half_width, degree)
        rows.append(
            {
                "m1": m[0],
                "m2": m[1],
                "length": rho,
                "alpha_d": alpha_d,
                "cos_alpha": math.cos(alpha_d),
                "weight": fit["weight"],
                "normalized_weight": fit["weight"] / scale,
                "residual": fit["residual"],
            }
        )
        logger.debug(f"Pico |d|={rho:.6f} d={m}: peso={fit['weight']:.6e}, cos={math.cos(alpha_d):.6f}")
    return pd.DataFrame(rows)
