"""
Toro plano ℝ²/L con potencial de campo nulo: reducción de gauge,
espectro cerrado y genericidad de la red.
"""
import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from src.beams.gauge import FourierPeriodic, GaugeField
from src.spectra.lattice import Lattice
from src.spectra.spectrum import TORUS_COLUMNS, Spectrum
from src.utils.errors import NotCurlFree
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

CURL_TOL = 1e-10
GENERICITY_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class TorusProblem:
    """Red L y potencial constante A₀ (tras la reducción de gauge)."""

    lattice: Lattice
    A0: np.ndarray = None

    def __post_init__(self):
        A0 = np.zeros(2) if self.A0 is None else np.asarray(self.A0, dtype=float).reshape(2)
        object.__setattr__(self, "A0", A0)

    @property
    def fluxes(self) -> Tuple[float, float]:
        return torus_fluxes(self.lattice, self.A0)

    def params(self) -> Dict[str, object]:
        return {"basis": self.lattice.basis.tolist(), "A0": self.A0.tolist()}


@dataclass(frozen=True)
class GenericityReport:
    """Resultado de |d'| = |d| ⇒ d' = ±d; ``witness`` es el primer par que falla."""

    passed: bool
    bound: float
    checked: int
    witness: Optional[Tuple[Tuple[float, float], Tuple[float, float]]] = None
    witness_indices: Optional[Tuple[Tuple[int, int], Tuple[int, int]]] = None


def torus_fluxes(lattice: Lattice, A0: Sequence[float]) -> Tuple[float, float]:
    """(α₁, α₂) = (e₁·A₀, e₂·A₀)."""
    A0 = np.asarray(A0, dtype=float)
    return float(lattice.basis[0] @ A0), float(lattice.basis[1] @ A0)


def gauge_equivalent(lattice: Lattice, A0: Sequence[float], B0: Sequence[float], tol: float = 1e-9) -> bool:
    """True si αⱼ(A₀) ≡ αⱼ(B₀) módulo 2π para j = 1, 2."""
    for a, b in zip(torus_fluxes(lattice, A0), torus_fluxes(lattice, B0)):
        if abs(math.remainder(a - b, 2.0 * math.pi)) > tol:
            return False
    return True


def reduce_to_constant_gauge(A: FourierPeriodic) -> Tuple[np.ndarray, Dict[Tuple[int, int], np.ndarray]]:
    """
    Escribe A = A₀ + ∇φ con φ periódico de media cero.

    Con campo nulo cada A_δ es paralelo a δ y φ_δ = δ·A_δ / (2πi δ·δ).

    Args:
        A: Potencial periódico de Fourier

    Returns:
        (A₀, {índice δ: φ_δ})

    Raises:
        NotCurlFree: si δ₂A₁ − δ₁A₂ ≠ 0 para algún modo
    """
    worst = A.max_curl_coefficient()
    if worst > CURL_TOL:
        raise NotCurlFree(f"Campo magnético no nulo: max|δ₂A₁ − δ₁A₂| = {worst:.3e}")
    A0 = np.real(A.coefficients.get((0, 0), np.zeros(2, dtype=complex))).astype(float)
    phi: Dict[Tuple[int, int], complex] = {}
    for n, value in A.coefficients.items():
        if n == (0, 0):
            continue
        delta = A.lattice.dual_vector(n)
        phi[n] = complex(delta @ value) / (2j * math.pi * float(delta @ delta))
    return A0, phi


def gauge_residual(
    A: FourierPeriodic,
    A0: np.ndarray,
    phi: Dict[Tuple[int, int], complex],
    points: np.ndarray,
) -> float:
    """max ‖A(x) − A₀ − ∇φ(x)‖∞ sobre los puntos dados."""
    worst = 0.0
    for x in np.asarray(points, dtype=float):
        grad = np.zeros(2, dtype=complex)
        for n, coeff in phi.items():
            delta = A.lattice.dual_vector(n)
            grad += coeff * 2j * math.pi * delta * np.exp(2j * math.pi * float(delta @ x))
        worst = max(worst, float(np.max(np.abs(A.potential(x) - A0 - grad.real))))
    return worst


def hadamard_overlap(gauge: GaugeField, lattice: Lattice, d: Sequence[float], n_grid: int = 16) -> complex:
    """
    I(d) = ∫_{T²} exp(i ∫₀¹ d·A(x + sd) ds) dx por regla del trapecio periódica.

    Para potenciales de campo nulo coincide con e^{id·A₀}|T²|.
    """
    d = np.asarray(d, dtype=float)
    total = []
    for u1 in range(n_grid):
        for u2 in range(n_grid):
            x = np.array([u1, u2], dtype=float) / n_grid @ lattice.basis
            total.append(np.exp(1j * gauge.segment_integral(x, x + d)))
    return complex(np.sum(total) * lattice.cell_area / n_grid**2)


def torus_spectrum(problem: TorusProblem, K: float) -> Spectrum:
    """
    λ_δ = |2πδ − A₀|² <= K² sobre δ ∈ L*.

    Example:
        >>> lat = Lattice.from_vectors((1, 0), (0, 1))
        >>> torus_spectrum(TorusProblem(lat, (math.pi, 0)), 10).lambdas[0]   # π²
    """
    lattice, A0 = problem.lattice, problem.A0
    radius = (K + float(np.linalg.norm(A0))) / (2.0 * math.pi)
    rows = []
    for (n1, n2), delta in lattice.enumerate(radius, dual=True):
        vec = 2.0 * math.pi * delta - A0
        lam = float(vec @ vec)
        if lam <= K * K:
            rows.append({"lambda": lam, "k": math.sqrt(lam), "delta1": n1, "delta2": n2})
    spectrum = Spectrum.from_rows(
        rows,
        TORUS_COLUMNS,
        ["lambda", "delta1", "delta2"],
        cutoff=K,
        complete=True,
        kind="torus",
        params={**problem.params(), "K": K},
    )
    logger.info(f"Espectro del toro: {len(spectrum):,} autovalores con K={K}")
    return spectrum


def _canonical(m: Tuple[int, int]) -> bool:
    """Representante de {d, −d}: primer índice no nulo positivo."""
    return m[0] > 0 or (m[0] == 0 and m[1] > 0)


def lattice_genericity(lattice: Lattice, bound: float) -> GenericityReport:
    """
    Verifica exhaustivamente |d'| = |d| ⇒ d' = ±d para 0 < |d| <= bound.

    Las normas se comparan con tolerancia relativa 1e−9; los pares (d, −d)
    nunca cuentan como violación.

    Example:
        >>> lattice_genericity(Lattice.from_vectors((1, 0), (0, 1)), 2).witness
        ((1.0, 0.0), (0.0, 1.0))
    """
    reps = [
        (float(np.linalg.norm(vec)), m, vec)
        for m, vec in lattice.enumerate(bound)
        if _canonical(m)
    ]
    reps.sort(key=lambda item: (item[0], item[1]))
    for (n_a, m_a, v_a), (n_b, m_b, v_b) in zip(reps[:-1], reps[1:]):
        if abs(n_a - n_b) <= GENERICITY_RTOL * max(n_a, n_b):
            first, second = sorted([(m_a, v_a), (m_b, v_b)], key=lambda item: item[0], reverse=True)
            logger.info(f"Red no genérica: |d| = {n_a:.12f} para {first[0]} y {second[0]}")
            return GenericityReport(
                passed=False,
                bound=bound,
                checked=len(reps),
                witness=(tuple(map(float, first[1])), tuple(map(float, second[1]))),
                witness_indices=(first[0], second[0]),
            )
    return GenericityReport(passed=True, bound=bound, checked=len(reps))
