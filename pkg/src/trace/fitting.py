"""
Extracción del coeficiente de la singularidad por mínimos cuadrados.

Todas las regresiones usan statsmodels OLS: la traza en la ventana de ajuste
se explica con el perfil de banda limitada y un fondo polinómico.
"""
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
import statsmodels.api as sm

from src.billiards.lengths import LengthSpectrum
from src.config import settings
from src.trace.model import singularity_shape
from src.trace.prediction import Side, SingularityPrediction
from src.trace.wave_trace import TraceSamples
from src.trace.window import WindowSpec
from src.utils.errors import ConfigError, IsolationViolation
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

MAX_HALF_WIDTH = 0.35
SELF_TOL = 1e-9
NARROWING = 0.9


@dataclass(frozen=True)
class IsolationReport:
    """Aislamiento de L en el espectro de longitudes."""

    passed: bool
    L: float
    half_width: float
    nearest_length: Optional[float]
    nearest_distance: float
    nearest_accumulation: Optional[float] = None
    obstacle_overlap: bool = False

    def as_dict(self) -> Dict[str, object]:
        return asdict(self)


@dataclass
class FitResult:
    """Resultado de un ajuste de amplitud."""

    C_hat: float
    C_pred: float
    residual: float
    side: Side
    L: float
    t_lo: float
    t_hi: float
    K: float
    degree: int
    n_points: int
    background: List[float] = field(default_factory=list)
    isolation: Optional[IsolationReport] = None

    @property
    def relative_error(self) -> float:
        """|Ĉ − C|/|C| (nan si C = 0)."""
        return abs(self.C_hat - self.C_pred) / abs(self.C_pred) if self.C_pred else float("nan")

    def as_dict(self) -> Dict[str, object]:
        row = {k: v for k, v in asdict(self).items() if k not in ("background", "isolation")}
        row["relative_error"] = self.relative_error
        return row


@dataclass
class SideComparison:
    """Ajustes con ambos lados y el preferido (menor residuo)."""

    plus: FitResult
    minus: FitResult

    @property
    def preferred(self) -> Side:
        return "plus" if self.plus.residual < self.minus.residual else "minus"

    @property
    def winner(self) -> FitResult:
        return self.plus if self.preferred == "plus" else self.minus


@dataclass
class CosineLawResult:
    """Regresión de Ĉ(α)/Ĉ(0) sobre cos α."""

    slope: float
    intercept: float
    r_squared: float
    max_abs_error: float
    table: pd.DataFrame


def verify_isolation(lengths: LengthSpectrum, L: float, half_width: float) -> IsolationReport:
    """
    Pasa si ninguna otra longitud periódica cae a menos de ``half_width`` de L.

    Informa además el punto de acumulación 2πqR más cercano y si la ventana
    corta algún intervalo de órbitas que tocan el obstáculo.

    Example:
        >>> verify_isolation(length_spectrum(Geometry(1.0), 7.0), 3 * math.sqrt(3), 0.3).nearest_distance
        0.4607...
    """
    others = [x for x in lengths.lengths if abs(x - L) > SELF_TOL * max(1.0, L)]
    if others:
        distances = np.abs(np.asarray(others) - L)
        idx = int(np.argmin(distances))
        nearest, distance = float(others[idx]), float(distances[idx])
    else:
        nearest, distance = None, float("inf")

    accumulation = min(lengths.accumulation, key=lambda a: abs(a - L), default=None)
    lo, hi = L - half_width, L + half_width
    overlap = any(b_lo < hi and b_hi > lo for _, b_lo, b_hi in lengths.obstacle_bounds)
    near_accumulation = accumulation is not None and abs(accumulation - L) <= half_width

    passed = distance > half_width and not overlap and not near_accumulation
    if not passed:
        logger.warning(
            f"L={L:.6f} no aislada con semiancho {half_width}: "
            f"vecina {nearest} a {distance:.4f}, obstáculo={overlap}, acumulación={accumulation}"
        )
    return IsolationReport(
        passed=passed,
        L=float(L),
        half_width=float(half_width),
        nearest_length=nearest,
        nearest_distance=distance,
        nearest_accumulation=accumulation,
        obstacle_overlap=overlap,
    )


def choose_half_width(lengths: LengthSpectrum, L: float, default: Optional[float] = None) -> float:
    """min(default, 0.9 × distancia a la longitud vecina más cercana)."""
    default = settings.fit_half_width if default is None else default
    report = verify_isolation(lengths, L, default)
    if report.passed:
        return default
    narrowed = min(default, NARROWING * report.nearest_distance)
    logger.info(f"Ventana de ajuste reducida a ±{narrowed:.4f} alrededor de L={L:.6f}")
    return narrowed


def _design(t: np.ndarray, shape: np.ndarray, L: float, half_width: float, degree: int) -> pd.DataFrame:
    x = (t - L) / half_width
    columns = {"model": shape}
    for p in range(degree + 1):
        columns[f"bg{p}"] = x**p
    return pd.DataFrame(columns)


def fit_amplitude(
    trace: TraceSamples,
    prediction: SingularityPrediction,
    window: Optional[WindowSpec] = None,
    half_width: Optional[float] = None,
    degree: Optional[int] = None,
    lengths: Optional[LengthSpectrum] = None,
    side: Optional[Side] = None,
) -> FitResult:
    """
    Ajusta trace ≈ Ĉ·s·perfil(t) + polinomio de fondo en [L − w, L + w].

    ``s`` es ``prediction.trace_scale``, de modo que Ĉ queda en la escala de
    ``prediction.C``.

    Args:
        trace: Traza de banda limitada que cubre la ventana
        prediction: Predicción (aporta L, lado y C de referencia)
        window: Ventana espectral (por defecto la de la traza)
        half_width: Semiancho w <= 0.35 (por defecto settings.fit_half_width)
        degree: Grado del fondo (por defecto settings.background_degree)
        lengths: Espectro de longitudes para verificar el aislamiento
        side: Fuerza el lado del perfil (por defecto el de la predicción)

    Returns:
        FitResult con Ĉ y residuo normalizado √SSR/‖y‖

    Raises:
        IsolationViolation: si otra longitud invade la ventana
        ConfigError: si la ventana es demasiado ancha o tiene pocos puntos

    Example:
        >>> fit = fit_amplitude(samples, predict_singularity(3), lengths=spec)
        >>> fit.C_hat   # ≈ −0.2327
    """
    window = trace.window if window is None else window
    half_width = settings.fit_half_width if half_width is None else half_width
    degree = settings.background_degree if degree is None else degree
    side = prediction.side if side is None else side
    L = prediction.L

    if not 0.0 < half_width <= MAX_HALF_WIDTH:
        raise ConfigError(f"Semiancho de ajuste fuera de (0, {MAX_HALF_WIDTH}]: {half_width}")

    isolation = None
    if lengths is not None:
        isolation = verify_isolation(lengths, L, half_width)
        if not isolation.passed:
            raise IsolationViolation(
                f"Longitud {isolation.nearest_length} a {isolation.nearest_distance:.4f} de L={L:.6f} "
                f"(semiancho {half_width})"
            )

    samples = trace.restrict(L - half_width, L + half_width)
    if len(samples.t) < degree + 4:
        raise ConfigError(f"Solo {len(samples.t)} puntos en la ventana de ajuste alrededor de L={L:.6f}")

    shape = prediction.trace_scale * singularity_shape(L, side, window, samples.t)
    X = _design(samples.t, shape, L, half_width, degree)
    y = pd.Series(samples.values, name="trace")
    result = sm.OLS(y, X).fit()

    norm = float(np.linalg.norm(samples.values))
    residual = math.sqrt(float(result.ssr)) / norm if norm > 0 else float("nan")
    C_hat = float(result.params["model"])
    logger.debug(f"Ajuste L={L:.6f} lado={side}: Ĉ={C_hat:.6f}, residuo={residual:.3e}")
    return FitResult(
        C_hat=C_hat,
        C_pred=prediction.C,
        residual=residual,
        side=side,
        L=L,
        t_lo=float(samples.t[0]),
        t_hi=float(samples.t[-1]),
        K=window.K,
        degree=degree,
        n_points=len(samples.t),
        background=[float(result.params[f"bg{p}"]) for p in range(degree + 1)],
        isolation=isolation,
    )


def compare_sides(
    trace: TraceSamples,
    prediction: SingularityPrediction,
    window: Optional[WindowSpec] = None,
    half_width: Optional[float] = None,
    degree: Optional[int] = None,
    lengths: Optional[LengthSpectrum] = None,
) -> SideComparison:
    """Ajusta con los perfiles (t−L)₊ y (t−L)₋ y compara residuos."""
    fits = {
        side: fit_amplitude(trace, prediction, window, half_width, degree, lengths, side=side)
        for side in ("plus", "minus")
    }
    comparison = SideComparison(plus=fits["plus"], minus=fits["minus"])
    logger.info(
        f"Lados en L={prediction.L:.6f}: residuo+ {comparison.plus.residual:.3e}, "
        f"residuo− {comparison.minus.residual:.3e} → {comparison.preferred}"
    )
    return comparison


def cosine_law(rows: pd.DataFrame) -> CosineLawResult:
    """
    Regresión OLS de Ĉ(α)/Ĉ(0) sobre cos α.

    Args:
        rows: DataFrame con columnas ``alpha`` y ``C_hat``; debe incluir α = 0

    Returns:
        CosineLawResult con pendiente, ordenada, R² y el error máximo |ratio − cos α|
    """
    if not {"alpha", "C_hat"} <= set(rows.columns):
        raise ConfigError("Se requieren columnas 'alpha' y 'C_hat'")
    zero = rows[np.isclose(rows["alpha"].to_numpy(dtype=float), 0.0, atol=1e-12)]
    if zero.empty:
        raise ConfigError("El barrido de flujo debe incluir α = 0")
    C0 = float(zero["C_hat"].iloc[0])
    if C0 == 0.0:
        raise ConfigError("Ĉ(0) nulo: no se puede normalizar")

    table = rows.copy()
    table["ratio"] = table["C_hat"] / C0
    table["cos_alpha"] = np.cos(table["alpha"].to_numpy(dtype=float))
    table["abs_error"] = (table["ratio"] - table["cos_alpha"]).abs()

    result = sm.OLS(table["ratio"], sm.add_constant(table[["cos_alpha"]])).fit()
    return CosineLawResult(
        slope=float(result.params["cos_alpha"]),
        intercept=float(result.params["const"]),
        r_squared=float(result.rsquared),
        max_abs_error=float(table["abs_error"].max()),
        table=table,
    )
