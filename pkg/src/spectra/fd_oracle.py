"""
Oráculo de diferencias finitas en malla polar para el disco/anillo con flujo.

El flujo entra como fase de Peierls en el estencil angular, que es
circulante: cada modo discreto m tiene autovalor angular
μ_m = 4 sin²((m + α/2π)Δθ/2)/Δθ², y el problema 2D se separa exactamente
en un problema radial tridiagonal por modo.
"""
import math
from dataclasses import dataclass
from typing import List

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from src.spectra.disk import DiskFluxProblem
from src.spectra.spectrum import DISK_COLUMNS, Spectrum
from src.utils.errors import ConfigError, ConvergenceFailure
from src.utils.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class FDGrid:
    """Resolución de la malla polar (radial × angular)."""

    n_radial: int = 400
    n_angular: int = 256
    n_eigs: int = 20
    per_mode: int = 8

    def __post_init__(self):
        if self.n_radial < 16 or self.n_angular < 8 or self.n_eigs < 1:
            raise ConfigError(f"Malla demasiado gruesa: {self}")


def angular_eigenvalues(alpha: float, n_angular: int) -> List[tuple]:
    """(m, μ_m) de los modos discretos, ordenados por μ y luego por m."""
    beta = alpha / (2.0 * math.pi)
    dtheta = 2.0 * math.pi / n_angular
    modes = []
    for j in range(n_angular):
        m = j if j < n_angular // 2 else j - n_angular
        mu = 4.0 * math.sin(0.5 * (m + beta) * dtheta) ** 2 / dtheta**2
        modes.append((m, mu))
    return sorted(modes, key=lambda item: (item[1], item[0]))


def _disk_radial_tridiagonal(nu: float, R: float, n: int):
    """
    Problema radial para g con u = r^ν g: −(1/w)(w g')' = λ g, w = r^{2ν+1}.

    Malla centrada r_i = (i − ½)h, h = R/(n + ½): el flujo en r = 0 se anula
    y g(R) = 0. Los cocientes de pesos se calculan en escala logarítmica.
    """
    h = R / (n + 0.5)
    i = np.arange(1, n + 1)
    r = (i - 0.5) * h
    r_half = i * h  # r_{i+1/2}
    p = 2.0 * nu + 1.0
    log_r, log_half = np.log(r), np.log(r_half)

    right = np.exp(p * (log_half - log_r)) / h**2
    left = np.zeros(n)
    left[1:] = np.exp(p * (log_half[:-1] - log_r[1:])) / h**2
    diag = right + left
    off = -np.exp(p * (log_half[:-1] - 0.5 * log_r[:-1] - 0.5 * log_r[1:])) / h**2
    return diag, off


def _annulus_radial_tridiagonal(mu: float, r0: float, R: float, n: int):
    """−(1/r)(r u')' + μu/r² con Dirichlet en r0 y R; simetrizado con √r."""
    h = (R - r0) / (n + 1)
    r = r0 + h * np.arange(1, n + 1)
    r_plus, r_minus = r + 0.5 * h, r - 0.5 * h
    diag = (r_plus + r_minus) / (r * h**2) + mu / r**2
    off = -r_plus[:-1] / (h**2 * np.sqrt(r[:-1] * r[1:]))
    return diag, off


def fd_oracle_spectrum(problem: DiskFluxProblem, grid: FDGrid = FDGrid()) -> Spectrum:
    """
    Autovalores más bajos por diferencias finitas (error O(h²)).

    Los modos angulares se recorren por μ creciente; como λ > μ/R², se
    detiene el recorrido cuando μ/R² supera el n-ésimo autovalor hallado.

    Args:
        problem: Disco o anillo con flujo
        grid: Resolución de la malla

    Returns:
        Spectrum (kind="fd") con los ``grid.n_eigs`` autovalores más bajos

    Raises:
        ConvergenceFailure: si el solver tridiagonal falla o no hay suficientes autovalores
    """
    R, r0 = problem.R, problem.r0
    collected = []
    for m, mu in angular_eigenvalues(problem.alpha, grid.n_angular):
        if len(collected) >= grid.n_eigs:
            threshold = sorted(item[0] for item in collected)[grid.n_eigs - 1]
            if mu / R**2 > threshold:
                break
        nu_d = math.sqrt(mu)
        if r0 > 0.0:
            diag, off = _annulus_radial_tridiagonal(mu, r0, R, grid.n_radial)
        else:
            diag, off = _disk_radial_tridiagonal(nu_d, R, grid.n_radial)
        try:
            values = eigh_tridiagonal(
                diag, off, eigvals_only=True, select="i", select_range=(0, grid.per_mode - 1)
            )
        except LinAlgError as e:
            raise ConvergenceFailure(f"Solver tridiagonal falló en el modo m={m}: {e}") from e
        if not np.all(np.isfinite(values)):
            raise ConvergenceFailure(f"Autovalores no finitos en el modo m={m}")
        for n, lam in enumerate(values, start=1):
            collected.append((float(lam), m, nu_d, n))

    if len(collected) < grid.n_eigs:
        raise ConvergenceFailure(f"Solo {len(collected)} autovalores para n_eigs={grid.n_eigs}")

    collected.sort(key=lambda item: (item[0], item[1], item[3]))
    rows = [
        {"lambda": lam, "k": math.sqrt(lam), "m": m, "nu": nu, "n": n}
        for lam, m, nu, n in collected[: grid.n_eigs]
    ]
    logger.debug(f"Oráculo FD α={problem.alpha:.6f}: λ₁={rows[0]['lambda']:.8f}")
    return Spectrum.from_rows(
        rows,
        DISK_COLUMNS,
        ["lambda", "m", "n"],
        cutoff=rows[-1]["k"],
        complete=True,
        kind="fd",
        params={**problem.params(), "n_radial": grid.n_radial, "n_angular": grid.n_angular},
    )
