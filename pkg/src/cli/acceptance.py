"""
Suite de aceptación - Orquestación de los ocho criterios del laboratorio.
"""
import math
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.billiards.geometry import Geometry
from src.billiards.lengths import length_spectrum
from src.cli.commands import CommandResult, beam_checks, disk_fit_table, torus_potential
from src.cli.config import ExperimentConfig
from src.spectra.bessel import bessel_j_zeros
from src.spectra.disk import DiskFluxProblem, annulus_zeros, disk_flux_spectrum, weyl_count
from src.spectra.fd_oracle import FDGrid, fd_oracle_spectrum
from src.spectra.lattice import Lattice
from src.spectra.spectrum import Spectrum
from src.spectra.torus import TorusProblem, lattice_genericity, torus_spectrum
from src.trace.fitting import choose_half_width, compare_sides, cosine_law, fit_amplitude, verify_isolation
from src.trace.model import bandlimited_model
from src.trace.prediction import predict_singularity
from src.trace.torus_peaks import torus_peak_weights
from src.trace.wave_trace import TraceSamples, bandlimited_trace
from src.trace.window import WindowSpec, time_grid
from src.utils.errors import AcceptanceFailure, NumericalError
from src.utils.logger import log_banner, log_duration, setup_logger
from src.utils.storage import ResultStore

logger = setup_logger(__name__)

COSINE_SWEEP = [0.0, math.pi / 4, math.pi / 3, math.pi / 2, 2 * math.pi / 3, math.pi]
TORUS_SWEEP = [0.0, math.pi / 3, math.pi / 2, math.pi]
FD_ALPHAS = [0.0, 0.3 * math.pi, 0.7 * math.pi, math.pi]
TRIANGLE_C = -(2.0**-2.5) * 3.0**0.25
SQUARE_C = 0.25 * math.sin(math.pi / 4) ** 1.5
PLANTED_C = -0.2327


@dataclass
class CriterionResult:
    """Resultado de un criterio de aceptación."""

    id: int
    name: str
    passed: bool
    value: float
    target: float
    tolerance: float
    detail: str = ""

    def as_dict(self) -> Dict[str, object]:
        return asdict(self)


class AcceptanceSuite:
    """
    Ejecuta los criterios de aceptación a escala de escritorio.

    Workflow:
    1. Ley del coseno y coeficiente absoluto (disco, K = 60..100)
    2. Lado y signo (triángulo y cuadrado)
    3. Toro genérico
    4. Haces, solvers espectrales, aislamiento y recuperación sintética
    """

    def __init__(self, config: ExperimentConfig, criteria: Optional[List[int]] = None):
        """Inicializa la suite con la configuración (hilos y salida)."""
        self.config = config
        self.criteria = criteria or list(range(1, 9))
        self._spectra: Dict[Tuple[float, float], Spectrum] = {}
        self._fits: Optional[pd.DataFrame] = None
        logger.info(f"AcceptanceSuite inicializada con criterios {self.criteria}")

    # === Cachés ===
    def _disk_spectrum(self, alpha: float, K: float) -> Spectrum:
        key = (alpha, K)
        if key not in self._spectra:
            self._spectra[key] = disk_flux_spectrum(DiskFluxProblem(alpha=alpha), K, threads=self.config.threads)
        return self._spectra[key]

    def _disk_config(self, **updates) -> ExperimentConfig:
        base = {"kind": "disk", "geometry": {"R": 1.0, "r0": 0.0}, "K": 80.0, "ngon": 3, "half_width": None}
        return ExperimentConfig.model_validate({**self.config.model_dump(), **base, **updates})

    def _cosine_fits(self) -> pd.DataFrame:
        if self._fits is None:
            config = self._disk_config(alpha=COSINE_SWEEP)
            self._fits = disk_fit_table(config, COSINE_SWEEP, 80.0)
        return self._fits

    def _triangle_fit_at(self, K: float) -> float:
        prediction = predict_singularity(3, 1.0, 0.0)
        lengths = length_spectrum(Geometry(1.0), prediction.L + 1.0)
        hw = choose_half_width(lengths, prediction.L)
        grid = time_grid(prediction.L - hw - 0.05, prediction.L + hw + 0.05, K)
        samples = bandlimited_trace(self._disk_spectrum(0.0, K), WindowSpec(K), grid, threads=self.config.threads)
        return fit_amplitude(samples, prediction, half_width=hw, lengths=lengths).C_hat

    # === Criterios ===
    def flux_cosine_law(self) -> CriterionResult:
        law = cosine_law(self._cosine_fits())
        return CriterionResult(
            1, "Ley del coseno Ĉ(α)/Ĉ(0) = cos α", law.max_abs_error <= 0.05, law.max_abs_error, 0.0, 0.05,
            f"pendiente={law.slope:.4f}, R²={law.r_squared:.6f}",
        )

    def absolute_coefficient(self) -> CriterionResult:
        fits = self._cosine_fits()
        C0 = float(fits.loc[fits["alpha"] == 0.0, "C_hat"].iloc[0])
        rel = abs(C0 - TRIANGLE_C) / abs(TRIANGLE_C)
        C60, C100 = self._triangle_fit_at(60.0), self._triangle_fit_at(100.0)
        drift = abs(C100 - C60) / abs(C100)
        return CriterionResult(
            2, "Coeficiente absoluto del triángulo", rel <= 0.10 and drift <= 0.05, C0, TRIANGLE_C, 0.10,
            f"error relativo={rel:.4f}, Ĉ(K=60)={C60:.6f}, Ĉ(K=100)={C100:.6f}, deriva={drift:.4f}",
        )

    def side_discrimination(self) -> CriterionResult:
        K = 80.0
        window = WindowSpec(K)
        outcomes = []
        for N in (3, 4):
            prediction = predict_singularity(N, 1.0, 0.0)
            lengths = length_spectrum(Geometry(1.0), prediction.L + 1.0)
            hw = choose_half_width(lengths, prediction.L)
            grid = time_grid(prediction.L - hw - 0.05, prediction.L + hw + 0.05, K)
            samples = bandlimited_trace(self._disk_spectrum(0.0, K), window, grid, threads=self.config.threads)
            outcomes.append(compare_sides(samples, prediction, window, half_width=hw, lengths=lengths))
        triangle, square = outcomes
        square_rel = abs(abs(square.minus.C_hat) - SQUARE_C) / SQUARE_C
        passed = (
            triangle.preferred == "plus"
            and triangle.plus.C_hat < 0.0
            and square.preferred == "minus"
            and square.minus.C_hat < 0.0
            and square_rel <= 0.15
        )
        return CriterionResult(
            3, "Lado y signo (triángulo +, cuadrado −)", passed, square.minus.C_hat, -SQUARE_C, 0.15,
            f"triángulo: {triangle.preferred} Ĉ={triangle.plus.C_hat:.6f}; "
            f"cuadrado: {square.preferred} Ĉ={square.minus.C_hat:.6f} (error {square_rel:.4f})",
        )

    def torus(self) -> CriterionResult:
        lattice = Lattice.from_vectors((1.0, 0.0), (0.31, 1.07))
        genericity = lattice_genericity(lattice, 10.0)
        K = 200.0
        window = WindowSpec(K)
        grid = time_grid(0.85, 1.15, K)

        def weight(A0: np.ndarray) -> float:
            spectrum = torus_spectrum(TorusProblem(lattice, A0), K)
            samples = bandlimited_trace(spectrum, window, grid, threads=self.config.threads)
            table = torus_peak_weights(samples, lattice, A0, [(1, 0)], genericity_bound=10.0)
            return float(table["weight"].iloc[0])

        weights = [weight(torus_potential(lattice, theta)) for theta in TORUS_SWEEP]
        errors = [abs(w / weights[0] - math.cos(theta)) for w, theta in zip(weights, TORUS_SWEEP)]
        shifted_A0 = torus_potential(lattice, math.pi / 3) + 2.0 * math.pi * lattice.dual_vector((1, 1))
        shift = abs(weight(shifted_A0) - weights[1]) / abs(weights[0])
        passed = genericity.passed and max(errors) <= 0.03 and shift <= 1e-9
        return CriterionResult(
            4, "Toro: pesos ∝ cos(A₀·e₁)", passed, max(errors), 0.0, 0.03,
            f"genérica={genericity.passed}, invariancia de gauge={shift:.2e}",
        )

    def beams(self) -> CriterionResult:
        checks = beam_checks(3, 1.0)
        hess_err = abs(checks["hessian_det"] - (-4.0 * math.sqrt(3.0)))
        wind_err = abs(checks["winding_third_focal"] - 5.5 * math.pi)
        passed = (
            checks["frame_rel_error"] <= 1e-6
            and checks["symplectic_defect"] <= 1e-8
            and hess_err <= 1e-6
            and checks["hessian_rel_error"] <= 1e-6
            and wind_err <= 1e-3
            and checks["sign"] == -1
            and checks["min_im_M"] > 0.0
        )
        return CriterionResult(
            5, "Marco de Jacobi y haz del triángulo", passed, checks["winding_third_focal"], 5.5 * math.pi, 1e-3,
            f"F(L)={checks['frame_rel_error']:.2e}, simpléctico={checks['symplectic_defect']:.2e}, "
            f"Hessiano={hess_err:.2e}, signo={checks['sign']}, min Im M={checks['min_im_M']:.3e}",
        )

    def spectral_solvers(self) -> CriterionResult:
        half = bessel_j_zeros(0.5, 40.0)
        bessel_err = float(np.max(np.abs(half - math.pi * np.arange(1, len(half) + 1))))
        ring = annulus_zeros(0.5, 30.0, 0.5, 1.0)
        ring_err = float(np.max(np.abs(ring - 2.0 * math.pi * np.arange(1, len(ring) + 1))))

        fd_err = 0.0
        for alpha in FD_ALPHAS:
            fd = fd_oracle_spectrum(DiskFluxProblem(alpha=alpha), FDGrid(n_eigs=10))
            exact = self._disk_spectrum(alpha, 20.0).lambdas[:10]
            fd_err = max(fd_err, float(np.max(np.abs(fd.lambdas - exact) / exact)))

        base = self._disk_spectrum(0.3 * math.pi, 40.0)
        mirrored = self._disk_spectrum(-0.3 * math.pi, 40.0)
        shifted = self._disk_spectrum(0.3 * math.pi + 2.0 * math.pi, 40.0)
        identities = base.same_multiset(mirrored) and base.same_multiset(shifted, rtol=1e-12)

        K = 100.0
        count = self._disk_spectrum(0.0, K).count_below(K)
        weyl = abs(count - weyl_count(DiskFluxProblem(), K, boundary_term=False)) / (K * K / 4.0)

        passed = bessel_err <= 1e-12 and ring_err <= 1e-10 and fd_err <= 0.005 and identities and weyl <= 0.03
        return CriterionResult(
            6, "Solvers espectrales", passed, fd_err, 0.0, 0.005,
            f"Bessel={bessel_err:.1e}, anillo={ring_err:.1e}, identidades={identities}, Weyl={weyl:.4f} ({count})",
        )

    def isolation(self) -> CriterionResult:
        L = 3.0 * math.sqrt(3.0)
        report = verify_isolation(length_spectrum(Geometry(1.0), 8.0), L, 0.3)
        expected = 4.0 * math.sqrt(2.0) - L
        passed = report.passed and abs(report.nearest_distance - expected) < 1e-9
        return CriterionResult(
            7, "Aislamiento de 3√3", passed, report.nearest_distance, expected, 1e-9,
            f"vecina={report.nearest_length}",
        )

    def planted_recovery(self) -> CriterionResult:
        K = 80.0
        window = WindowSpec(K)
        prediction = predict_singularity(3, 1.0, 0.0).with_coefficient(PLANTED_C)
        grid = time_grid(prediction.L - 0.35, prediction.L + 0.35, K)
        values = bandlimited_model(prediction, window, grid) + 0.4 - 0.15 * (grid - prediction.L)
        samples = TraceSamples(grid, values, window, {"kind": "synthetic"})
        fit = fit_amplitude(samples, prediction, window, half_width=0.3, degree=1)
        rel = abs(fit.C_hat - PLANTED_C) / abs(PLANTED_C)
        return CriterionResult(
            8, "Recuperación de coeficiente sintético", rel <= 0.01, fit.C_hat, PLANTED_C, 0.01,
            f"error relativo={rel:.2e}",
        )

    # === Orquestación ===
    def _runners(self) -> Dict[int, Callable[[], CriterionResult]]:
        return {
            1: self.flux_cosine_law,
            2: self.absolute_coefficient,
            3: self.side_discrimination,
            4: self.torus,
            5: self.beams,
            6: self.spectral_solvers,
            7: self.isolation,
            8: self.planted_recovery,
        }

    @staticmethod
    def _failed(cid: int, name: str, detail: str) -> CriterionResult:
        nan = float("nan")
        return CriterionResult(cid, name, False, nan, nan, nan, detail)

    def run(self) -> pd.DataFrame:
        """
        Ejecuta los criterios seleccionados.

        Returns:
            DataFrame (id, name, passed, value, target, tolerance, detail)

        Example:
            >>> suite = AcceptanceSuite(load_config(), criteria=[7, 8])
            >>> suite.run()["passed"].all()
        """
        log_banner(logger, "INICIANDO SUITE DE ACEPTACIÓN")

        runners = self._runners()
        results = []
        for cid in self.criteria:
            logger.info(f"\n🔬 CRITERIO {cid}")
            try:
                with log_duration(logger, f"criterio {cid}"):
                    result = runners[cid]()
            except NumericalError as e:
                result = self._failed(cid, runners[cid].__name__, str(e))
            except Exception as e:
                logger.exception(f"Error inesperado en el criterio {cid}")
                result = self._failed(cid, runners[cid].__name__, f"{type(e).__name__}: {e}")
            marker = "✅" if result.passed else "❌"
            logger.info(f"   {marker} {result.name}: {result.detail}")
            results.append(result.as_dict())

        table = pd.DataFrame(results)
        passed = int(table["passed"].sum())
        log_banner(logger, f"ACEPTACIÓN: {passed}/{len(table)} criterios", "✅" if passed == len(table) else "❌")
        return table


def cmd_verify(config: ExperimentConfig, criteria: Optional[List[int]] = None) -> CommandResult:
    """
    Ejecuta la suite y escribe acceptance.csv.

    Raises:
        AcceptanceFailure: si algún criterio falla (tras escribir el informe)
    """
    table = AcceptanceSuite(config, criteria).run()
    summary = {"passed": int(table["passed"].sum()), "total": len(table)}
    path = ResultStore(config.out).write_frame(table, "acceptance", config.provenance(), summary)
    if not table["passed"].all():
        failed = table.loc[~table["passed"], "id"].tolist()
        raise AcceptanceFailure(f"Criterios fallidos: {failed}")
    return CommandResult("verify", table, path, summary)
