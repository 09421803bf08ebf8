"""
Predicción cerrada de la singularidad principal de la traza en t = L.
"""
import math
from dataclasses import dataclass, asdict
from typing import Dict, Literal, Optional

from src.utils.errors import ConfigError

Side = Literal["plus", "minus"]

# Σ χ cos(t√λ) lleva 2·C(N, α) en t = L_N (suma de Poisson sobre las acciones;
# el término M = 0 reproduce la densidad de Weyl k/2)
NGON_TRACE_SCALE = 2.0


@dataclass(frozen=True)
class SingularityPrediction:
    """
    Coeficiente C de C·(t − L)_±^{−3/2} para la órbita N-gonal (o |d| en el toro).

    Attributes:
        N: Lados de la órbita (0 para picos del toro)
        R: Radio del disco
        L: Longitud de la órbita
        C: Coeficiente real con prefactor y cos α incluidos
        side: "plus" para (t−L)₊, "minus" para (t−L)₋
        prefactor: ±1
        alpha: Flujo α_γ
        magnitude: 2^{−5/2} h_N^{3/2} N^{−1/2}
        trace_scale: Factor entre C y el coeficiente de la traza Σ χ cos(t√λ)
    """

    N: int
    R: float
    L: float
    C: float
    side: Side
    prefactor: int
    alpha: float
    magnitude: float
    trace_scale: float = 1.0

    @property
    def flux_factor(self) -> float:
        """K(L) = 2 cos α_γ."""
        return 2.0 * math.cos(self.alpha)

    @property
    def trace_coefficient(self) -> float:
        """Coeficiente de la singularidad en la traza de banda limitada."""
        return self.trace_scale * self.C

    def with_coefficient(self, C: float) -> "SingularityPrediction":
        return SingularityPrediction(**{**asdict(self), "C": C})

    def as_dict(self) -> Dict[str, object]:
        return asdict(self)


def ngon_prefactor(N: int) -> int:
    """(−1)^{(N−1)/2} para N impar, (−1)^{N/2−1} para N par."""
    return (-1) ** ((N - 1) // 2) if N % 2 else (-1) ** (N // 2 - 1)


def predict_singularity(N: int, R: float = 1.0, alpha: float = 0.0) -> SingularityPrediction:
    """
    Singularidad de la traza en L_N = 2NR sin(π/N).

    C(N, α) = prefactor · 2^{−5/2} h_N^{3/2} N^{−1/2} cos α; lado (t−L)₊ para
    N impar y (t−L)₋ para N par. La traza de banda limitada lleva
    ``trace_coefficient`` = 2·C, que es lo que ajusta ``fit_amplitude`` antes
    de devolver Ĉ en la escala de C.

    Example:
        >>> predict_singularity(3, 1.0, 0.0).C   # −2^{−5/2}·3^{1/4} ≈ −0.2326512
    """
    if N < 2:
        raise ConfigError(f"N debe ser >= 2 (recibido {N})")
    if not R > 0:
        raise ConfigError(f"R debe ser positivo (recibido {R})")
    h_N = 2.0 * R * math.sin(math.pi / N)
    magnitude = 2.0**-2.5 * h_N**1.5 / math.sqrt(N)
    prefactor = ngon_prefactor(N)
    cos_alpha = math.cos(alpha)
    # cos(π/2) no es exactamente cero en coma flotante
    if abs(cos_alpha) < 1e-15:
        cos_alpha = 0.0
    return SingularityPrediction(
        N=N,
        R=R,
        L=N * h_N,
        C=prefactor * magnitude * cos_alpha,
        side="plus" if N % 2 else "minus",
        prefactor=prefactor,
        alpha=alpha,
        magnitude=magnitude,
        trace_scale=NGON_TRACE_SCALE,
    )


def predict_torus_peak(length: float, alpha_d: float, cell_area: Optional[float] = None) -> SingularityPrediction:
    """
    Pico del toro en t = |d| con peso proporcional a cos(d·A₀).

    Si se da el área de la celda, C = |T²|·2cos(d·A₀)/(2π) (peso de la
    representación de Poisson); si no, solo se informa cos(d·A₀).
    """
    scale = 1.0 if cell_area is None else cell_area / math.pi
    return SingularityPrediction(
        N=0,
        R=float("nan"),
        L=float(length),
        C=scale * math.cos(alpha_d),
        side="plus",
        prefactor=1,
        alpha=alpha_d,
        magnitude=scale,
    )
