"""
Fase estacionaria al cierre de una órbita: Hessiano reducido, rama de
det(−iQ)^{−1/2} y resolución del signo de la singularidad.
"""
import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.linalg import eigvals

from src.billiards.jacobi import JacobiFrame
from src.utils.errors import BranchDomainError, SingularFrame, SingularHessian
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

EIG_TOL = 1e-12
BRANCH_TOL = 1e-10


@dataclass(frozen=True)
class HessianReport:
    """Determinante del Hessiano aumentado y su forma cerrada al cierre."""

    det_block: complex
    det_closed_form: complex
    v1_eigenvalues: np.ndarray
    v1_det: complex

    @property
    def relative_error(self) -> float:
        return abs(self.det_block - self.det_closed_form) / abs(self.det_closed_form)


@dataclass(frozen=True)
class SingularitySignData:
    """
    Rama de (det Z)^{1/2} según la amplitud y según la fase estacionaria.

    ``sign`` = +1 si coinciden; ``sigma`` = (−i)^{N+1}·sign es el factor
    complejo total de la órbita N-gonal y ``prefactor`` su parte real
    (N impar) o imaginaria (N par).
    """

    amplitude_branch: complex
    stationary_branch: complex
    sign: int
    N: Optional[int] = None
    sigma: Optional[complex] = None
    prefactor: Optional[int] = None
    side: Optional[str] = None


def _perp(eta: np.ndarray) -> np.ndarray:
    return np.array([eta[1], -eta[0]])


def phase_matrix(frame: JacobiFrame) -> np.ndarray:
    M = (frame.c + 1j * frame.d) @ np.linalg.inv(frame.Z)
    return 0.5 * (M + M.T)


def augmented_hessian(frame: JacobiFrame, eta: np.ndarray, M: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Hessiano 4×4 en (x, z) de la fase del haz sobre la diagonal, aumentado
    con P_η en el bloque z para eliminar la dirección nula a lo largo de la órbita:

        [[M,          c − Ma          ],
         [cᵗ − aᵗM,   aᵗMa − aᵗc + P_η]]
    """
    eta = np.asarray(eta, dtype=float)
    a, c = frame.a, frame.c
    M = phase_matrix(frame) if M is None else M
    P_eta = np.outer(eta, eta)
    top = np.hstack([M, c - M @ a])
    bottom = np.hstack([c.T - a.T @ M, a.T @ M @ a - a.T @ c + P_eta])
    H = np.vstack([top, bottom])
    return 0.5 * (H + H.T)


def hessian_det_at_closure(frame: JacobiFrame, eta: np.ndarray, N: int, R: float) -> HessianReport:
    """
    Determinante del Hessiano aumentado y forma cerrada −(4N/h_N)·det(Z^{−1}).

    Args:
        frame: Marco de Jacobi en t = L
        eta: Dirección inicial de la órbita
        N: Lados de la órbita
        R: Radio

    Returns:
        HessianReport con ambos valores y el bloque sobre V₁ (componentes η)

    Raises:
        SingularFrame: si Z es singular
    """
    eta = np.asarray(eta, dtype=float)
    det_Z = complex(np.linalg.det(frame.Z))
    if abs(det_Z) < EIG_TOL:
        raise SingularFrame(f"Z singular al cierre (det Z = {det_Z:.3e})")

    H = augmented_hessian(frame, eta)
    kappa = 4.0 * N / (2.0 * R * math.sin(math.pi / N))
    closed = -kappa / det_Z

    U = np.zeros((4, 2))
    U[:2, 0] = eta
    U[2:, 1] = eta
    V1 = U.T @ H @ U
    report = HessianReport(
        det_block=complex(np.linalg.det(H)),
        det_closed_form=complex(closed),
        v1_eigenvalues=np.sort_complex(eigvals(V1)),
        v1_det=complex(np.linalg.det(V1)),
    )
    logger.debug(f"Hessiano al cierre N={N}: det={report.det_block:.10f}, cerrada={closed:.10f}")
    return report


def quadratic_phase(frame: JacobiFrame, eta: np.ndarray) -> Callable[[np.ndarray], complex]:
    """Fase cuadrática y ↦ ½ yᵗHy en las variables (δx, δz)."""
    H = augmented_hessian(frame, eta)
    return lambda y: complex(0.5 * y @ H @ y)


def reduced_phase_hessian(frame: JacobiFrame, eta: np.ndarray, step: float = 1e-3) -> np.ndarray:
    """
    Hessiano 3×3 en (u₁, u₂, w) por segundas diferencias de la fase cuadrática.

    Las variables (u, v, w) parametrizan x = u + vη + wη⊥, z = vη + wη⊥.
    La fila v debe ser (0, 0, 1, 0): la fase es plana a lo largo de la
    órbita y el aumento P_η aporta el 1.

    Raises:
        SingularHessian: si la dirección v no queda desacoplada
    """
    eta = np.asarray(eta, dtype=float)
    perp = _perp(eta)
    B = np.zeros((4, 4))
    B[:2, :2] = np.eye(2)
    B[:, 2] = np.concatenate([eta, eta])
    B[:, 3] = np.concatenate([perp, perp])
    phase = quadratic_phase(frame, eta)

    def f(q: np.ndarray) -> complex:
        return phase(B @ q)

    Hq = np.zeros((4, 4), dtype=complex)
    basis = np.eye(4) * step
    for i in range(4):
        for j in range(4):
            ei, ej = basis[i], basis[j]
            Hq[i, j] = (f(ei + ej) - f(ei - ej) - f(-ei + ej) + f(-ei - ej)) / (4.0 * step * step)

    expected_v = np.array([0.0, 0.0, 1.0, 0.0])
    if np.max(np.abs(Hq[2] - expected_v)) > 1e-6 * max(1.0, float(np.abs(Hq).max())):
        raise SingularHessian(f"La dirección a lo largo de la órbita no se desacopla: {Hq[2]}")
    keep = [0, 1, 3]
    return Hq[np.ix_(keep, keep)]


def sqrt_det_branch_stationary(Q: np.ndarray) -> complex:
    """
    det(−iQ)^{−1/2} con la rama de fase estacionaria.

    Se toma factor a factor sobre los autovalores μ de Q: (−iμ)^{−1/2} con
    la raíz principal, válida mientras Re(−iμ) >= 0 (continuación desde Q
    definida positiva).

    Raises:
        SingularHessian: si algún autovalor es nulo
        BranchDomainError: si Re(−iμ) < 0

    Example:
        >>> sqrt_det_branch_stationary(np.eye(2))          # i
        >>> sqrt_det_branch_stationary(np.diag([1, -1]))  # 1
    """
    Q = np.asarray(Q, dtype=complex)
    mu = eigvals(Q)
    scale = max(1.0, float(np.abs(mu).max()))
    value = complex(1.0)
    for m in mu:
        if abs(m) < EIG_TOL * scale:
            raise SingularHessian(f"Autovalor nulo en el Hessiano: {m}")
        rotated = -1j * m
        if rotated.real < -BRANCH_TOL * scale:
            raise BranchDomainError(f"Re(−iμ) = {rotated.real:.3e} < 0 para μ = {m}")
        value *= 1.0 / cmath.sqrt(rotated)
    return value


def stationary_sqrt_det(frame: JacobiFrame, eta: np.ndarray) -> complex:
    """
    (det Z)^{1/2} según la fase estacionaria:
    det(−iQ₃)^{−1/2} · √C · e^{−iπ/4}, con C = η⊥·c·η⊥.
    """
    eta = np.asarray(eta, dtype=float)
    perp = _perp(eta)
    Q3 = reduced_phase_hessian(frame, eta)
    C = float(perp @ frame.c @ perp)
    if C <= 0.0:
        raise SingularHessian(f"Curvatura transversal no positiva al cierre: C = {C}")
    return sqrt_det_branch_stationary(Q3) * math.sqrt(C) * cmath.exp(-0.25j * math.pi)


def resolve_sign(
    amplitude_branch: complex,
    stationary_branch: complex,
    N: Optional[int] = None,
) -> SingularitySignData:
    """
    Compara las dos ramas de (det Z)^{1/2}: +1 si coinciden, −1 si no.

    Con N se deriva además el factor total σ = (−i)^{N+1}·sign = i^{N−1}
    y el lado de la singularidad: N impar → (t−L)₊ con prefactor Re σ,
    N par → (t−L)₋ con prefactor Im σ.
    """
    ratio = amplitude_branch / stationary_branch
    sign = 1 if ratio.real > 0 else -1
    if abs(ratio.imag) > 1e-3 * abs(ratio):
        logger.warning(f"Las ramas no son colineales: cociente {ratio:.6f}")
    if N is None:
        return SingularitySignData(amplitude_branch, stationary_branch, sign)

    sigma = complex((-1j) ** (N + 1) * sign)
    if N % 2:
        prefactor, side = int(round(sigma.real)), "plus"
    else:
        prefactor, side = int(round(sigma.imag)), "minus"
    return SingularitySignData(amplitude_branch, stationary_branch, sign, N, sigma, prefactor, side)
