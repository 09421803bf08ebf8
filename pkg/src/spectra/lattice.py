"""
Redes planas L = {m₁e₁ + m₂e₂} y su dual L* = {δ : δ·d ∈ ℤ}.
"""
import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

import numpy as np

from src.utils.errors import ConfigError


@dataclass(frozen=True, eq=False)
class Lattice:
    """
    Red generada por las filas de ``basis`` (e₁, e₂).

    ``dual`` tiene por filas e₁*, e₂* con eᵢ*·eⱼ = δᵢⱼ.
    """

    basis: np.ndarray

    def __post_init__(self):
        E = np.asarray(self.basis, dtype=float).reshape(2, 2)
        if abs(np.linalg.det(E)) < 1e-12 * max(1.0, float(np.abs(E).max()) ** 2):
            raise ConfigError(f"Los vectores de la red son linealmente dependientes: {E.tolist()}")
        object.__setattr__(self, "basis", E)

    @classmethod
    def from_vectors(cls, e1: Sequence[float], e2: Sequence[float]) -> "Lattice":
        return cls(np.array([e1, e2], dtype=float))

    @property
    def dual(self) -> np.ndarray:
        return np.linalg.inv(self.basis).T

    @property
    def cell_area(self) -> float:
        """|T²| = |det(e₁, e₂)|."""
        return abs(float(np.linalg.det(self.basis)))

    def vector(self, m: Sequence[int]) -> np.ndarray:
        return np.asarray(m, dtype=float) @ self.basis

    def dual_vector(self, n: Sequence[int]) -> np.ndarray:
        return np.asarray(n, dtype=float) @ self.dual

    @staticmethod
    def _box(rows: np.ndarray, bound: float) -> Tuple[int, int]:
        """Cota de |mᵢ| para |m·rows| <= bound, vía las normas de filas de la inversa."""
        inv = np.linalg.inv(rows)
        col_norms = np.linalg.norm(inv, axis=0)
        return tuple(int(math.ceil(bound * n)) + 1 for n in col_norms)

    def enumerate(self, bound: float, dual: bool = False) -> Iterator[Tuple[Tuple[int, int], np.ndarray]]:
        """
        Recorre (índices, vector) de la red (o su dual) con norma <= bound.

        El orden es determinista (lexicográfico en los índices).
        """
        rows = self.dual if dual else self.basis
        M1, M2 = self._box(rows, bound)
        for m1 in range(-M1, M1 + 1):
            for m2 in range(-M2, M2 + 1):
                vec = m1 * rows[0] + m2 * rows[1]
                if math.hypot(vec[0], vec[1]) <= bound * (1.0 + 1e-12):
                    yield (m1, m2), vec
