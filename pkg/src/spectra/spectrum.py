"""
Tabla de autovalores con procedencia de cada modo.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal

import numpy as np
import pandas as pd

ProblemKind = Literal["disk", "annulus", "torus", "fd"]

DISK_COLUMNS = ["lambda", "k", "m", "nu", "n"]
TORUS_COLUMNS = ["lambda", "k", "delta1", "delta2"]


@dataclass(frozen=True)
class Mode:
    """Modo separado del disco con flujo: ν = |m + α/2π|, λ = k²."""

    m: int
    nu: float
    n: int
    k: float

    @property
    def lam(self) -> float:
        return self.k * self.k


@dataclass
class Spectrum:
    """
    Autovalores λ <= K² ordenados, con procedencia por fila.

    Attributes:
        table: DataFrame ordenado por (lambda, m, n) o (lambda, delta1, delta2)
        cutoff: Frecuencia de corte K
        complete: True si cada canal pasó la verificación de conteo
        kind: Tipo de problema
        params: Parámetros del problema (para la cabecera CSV)
    """

    table: pd.DataFrame
    cutoff: float
    complete: bool
    kind: ProblemKind
    params: Dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.table)

    @property
    def lambdas(self) -> np.ndarray:
        return self.table["lambda"].to_numpy()

    @property
    def frequencies(self) -> np.ndarray:
        return self.table["k"].to_numpy()

    def count_below(self, k: float) -> int:
        """#{λ <= k²}."""
        return int(np.searchsorted(self.lambdas, k * k, side="right"))

    def modes(self) -> List[Mode]:
        if self.kind not in ("disk", "annulus"):
            raise TypeError(f"El espectro {self.kind} no tiene modos (m, n)")
        return [
            Mode(int(r.m), float(r.nu), int(r.n), float(r.k))
            for r in self.table.itertuples(index=False)
        ]

    def same_multiset(self, other: "Spectrum", rtol: float = 0.0) -> bool:
        """Igualdad de multiconjuntos de λ (exacta si rtol = 0)."""
        if len(self) != len(other):
            return False
        a, b = np.sort(self.lambdas), np.sort(other.lambdas)
        if rtol == 0.0:
            return bool(np.array_equal(a, b))
        return bool(np.allclose(a, b, rtol=rtol, atol=0.0))

    def to_frame(self) -> pd.DataFrame:
        return self.table.copy()

    @classmethod
    def from_rows(
        cls,
        rows: List[Dict[str, Any]],
        columns: List[str],
        sort_keys: List[str],
        cutoff: float,
        complete: bool,
        kind: ProblemKind,
        params: Dict[str, Any],
    ) -> "Spectrum":
        table = pd.DataFrame(rows, columns=columns)
        table = table.sort_values(sort_keys, kind="mergesort").reset_index(drop=True)
        return cls(table=table, cutoff=float(cutoff), complete=complete, kind=kind, params=params)
