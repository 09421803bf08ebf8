"""
Traza de ondas de banda limitada T_χ(t) = Σ_j χ(√λ_j/K) cos(t√λ_j).
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from src.config import settings
from src.spectra.spectrum import Spectrum
from src.trace.window import WindowSpec
from src.utils.errors import IncompleteSpectrum
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

CHUNK = 256


@dataclass
class TraceSamples:
    """Valores de la traza en una malla temporal, con la ventana y la procedencia."""

    t: np.ndarray
    values: np.ndarray
    window: WindowSpec
    provenance: Dict[str, Any] = field(default_factory=dict)

    @property
    def weight_sum(self) -> float:
        """Σ_j χ(k_j/K) = T_χ(0), cota de |T_χ(t)|."""
        return float(self.provenance.get("weight_sum", float("nan")))

    def restrict(self, t_lo: float, t_hi: float) -> "TraceSamples":
        mask = (self.t >= t_lo) & (self.t <= t_hi)
        return TraceSamples(self.t[mask], self.values[mask], self.window, dict(self.provenance))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"t": self.t, "value": self.values})


def _chunk_values(times: np.ndarray, k: np.ndarray, w: np.ndarray) -> List[float]:
    # fsum es de redondeo exacto: el resultado no depende del orden ni del troceo
    return [math.fsum(w * np.cos(t * k)) for t in times]


def bandlimited_trace(
    spectrum: Spectrum,
    window: WindowSpec,
    grid: np.ndarray,
    threads: Optional[int] = None,
) -> TraceSamples:
    """
    Evalúa T_χ en la malla con suma compensada por punto.

    Args:
        spectrum: Espectro completo hasta K
        window: Ventana χ(k/K)
        grid: Tiempos
        threads: Hilos (la malla se reparte en bloques de tamaño fijo)

    Returns:
        TraceSamples determinista bit a bit

    Raises:
        IncompleteSpectrum: si el espectro no cubre K

    Example:
        >>> samples = bandlimited_trace(spec, WindowSpec(80), time_grid(5.0, 5.4, 80))
    """
    if spectrum.cutoff < window.K or not spectrum.complete:
        raise IncompleteSpectrum(
            f"Espectro con corte {spectrum.cutoff} (completo={spectrum.complete}) "
            f"insuficiente para K={window.K}"
        )
    threads = settings.threads if threads is None else threads
    k = spectrum.frequencies
    w = window.weights(k)
    active = w > 0.0
    k, w = k[active], w[active]

    grid = np.asarray(grid, dtype=float)
    chunks = [grid[i : i + CHUNK] for i in range(0, len(grid), CHUNK)]
    parts = Parallel(n_jobs=threads, prefer="threads")(
        delayed(_chunk_values)(chunk, k, w) for chunk in chunks
    )
    values = np.array([v for part in parts for v in part])

    provenance = {
        "kind": spectrum.kind,
        **spectrum.params,
        "n_modes": int(active.sum()),
        "weight_sum": math.fsum(w),
    }
    logger.debug(f"Traza: {len(grid)} tiempos, {active.sum()} modos activos")
    return TraceSamples(t=grid, values=values, window=window, provenance=provenance)
