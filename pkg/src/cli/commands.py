"""
Comandos del laboratorio: cada uno resuelve su experimento a partir de la
configuración validada y escribe un CSV con cabecera de procedencia.
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from src.beams.beam import evolve_beam, initial_beam
from src.beams.stationary import hessian_det_at_closure, resolve_sign, stationary_sqrt_det
from src.billiards.geometry import Geometry, ngon_orbit
from src.billiards.jacobi import closure_frame, focal_times, frame_at
from src.billiards.lengths import length_spectrum
from src.billiards.rays import trace_ray
from src.cli.config import ExperimentConfig
from src.config import settings
from src.spectra.disk import DiskFluxProblem, flux_spectrum
from src.spectra.lattice import Lattice
from src.spectra.spectrum import Spectrum
from src.spectra.torus import TorusProblem, torus_spectrum
from src.trace.fitting import choose_half_width, cosine_law, fit_amplitude, verify_isolation
from src.trace.prediction import SingularityPrediction, predict_singularity, predict_torus_peak
from src.trace.torus_peaks import torus_peak_weights
from src.trace.wave_trace import TraceSamples, bandlimited_trace
from src.trace.window import WindowSpec, time_grid
from src.utils.logger import log_banner, log_duration, setup_logger
from src.utils.storage import ResultStore

logger = setup_logger(__name__)

FIT_MARGIN = 0.05
TRIANGLE_WINDING = 5.5 * math.pi


@dataclass
class CommandResult:
    """Tabla producida por un comando, ruta del CSV y resumen para la cabecera."""

    name: str
    table: pd.DataFrame
    path: Optional[Any] = None
    summary: Dict[str, Any] = field(default_factory=dict)


# === Construcción de problemas ===
def lattice_of(config: ExperimentConfig) -> Lattice:
    return Lattice.from_vectors(config.torus.e1, config.torus.e2)


def torus_potential(lattice: Lattice, theta: float) -> np.ndarray:
    """A₀ = θ·e₁/|e₁|², de modo que A₀·e₁ = θ."""
    e1 = lattice.basis[0]
    return theta * e1 / float(e1 @ e1)


def build_spectrum(
    config: ExperimentConfig,
    alpha: Optional[float] = None,
    A0: Optional[np.ndarray] = None,
    K: Optional[float] = None,
) -> Spectrum:
    """Espectro del problema configurado (disco/anillo con flujo α o toro con A₀)."""
    K = config.K if K is None else K
    if config.kind == "torus":
        A0 = np.asarray(config.torus.A0 if A0 is None else A0, dtype=float)
        return torus_spectrum(TorusProblem(lattice_of(config), A0), K)
    alpha = config.alpha[0] if alpha is None else alpha
    problem = DiskFluxProblem(R=config.geometry.R, r0=config.geometry.r0, alpha=alpha)
    return flux_spectrum(problem, K, threads=config.threads)


def orbit_prediction(config: ExperimentConfig, alpha: float = 0.0) -> SingularityPrediction:
    return predict_singularity(config.ngon, config.geometry.R, alpha)


def _peak_lengths(config: ExperimentConfig) -> List[float]:
    lattice = lattice_of(config)
    return [float(np.linalg.norm(lattice.vector(p))) for p in config.torus.peaks]


def _store(config: ExperimentConfig) -> ResultStore:
    return ResultStore(config.out)


def _trace_on(spectrum: Spectrum, config: ExperimentConfig, t_start: float, t_stop: float, K: float) -> TraceSamples:
    return bandlimited_trace(spectrum, WindowSpec(K), time_grid(t_start, t_stop, K), threads=config.threads)


# === Comandos ===
def cmd_spectrum(config: ExperimentConfig) -> CommandResult:
    """Espectro hasta K² como CSV (lambda, k, m, nu, n) o (lambda, k, delta1, delta2)."""
    with log_duration(logger, f"espectro {config.kind} K={config.K:g}"):
        spectrum = build_spectrum(config)
    summary = {"kind": spectrum.kind, "cutoff": spectrum.cutoff, "complete": spectrum.complete, "count": len(spectrum)}
    path = _store(config).write_frame(spectrum.to_frame(), "spectrum", config.provenance(), summary)
    return CommandResult("spectrum", spectrum.to_frame(), path, summary)


def cmd_trace(config: ExperimentConfig) -> CommandResult:
    """T_χ(t) en una malla uniforme; por defecto [0, L + 1] con L la longitud de interés."""
    if config.kind == "torus":
        L = max(_peak_lengths(config))
    else:
        L = orbit_prediction(config).L
    t_start = 0.0 if config.t_start is None else config.t_start
    t_stop = L + 1.0 if config.t_stop is None else config.t_stop

    samples = _trace_on(build_spectrum(config), config, t_start, t_stop, config.K)
    summary = {"K": config.K, "weight_sum": samples.weight_sum, "points": len(samples.t)}
    path = _store(config).write_frame(samples.to_frame(), "trace", config.provenance(), summary)
    return CommandResult("trace", samples.to_frame(), path, summary)


def cmd_predict(config: ExperimentConfig) -> CommandResult:
    """Predicción cerrada (L, C, lado) por flujo o por pico del toro."""
    rows = []
    if config.kind == "torus":
        lattice = lattice_of(config)
        for theta in config.torus.sweep:
            A0 = torus_potential(lattice, theta)
            for p in config.torus.peaks:
                d = lattice.vector(p)
                pred = predict_torus_peak(float(np.linalg.norm(d)), float(d @ A0), lattice.cell_area)
                rows.append({"theta": theta, "m1": p[0], "m2": p[1], **pred.as_dict()})
    else:
        for alpha in config.alpha:
            rows.append(orbit_prediction(config, alpha).as_dict())
    table = pd.DataFrame(rows)
    path = _store(config).write_frame(table, "prediction", config.provenance())
    return CommandResult("predict", table, path)


def disk_fit_table(config: ExperimentConfig, alphas: List[float], K: float) -> pd.DataFrame:
    reference = orbit_prediction(config)
    geometry = Geometry(config.geometry.R, config.geometry.r0)
    lengths = length_spectrum(geometry, reference.L + 1.0)
    half_width = config.half_width or choose_half_width(lengths, reference.L)

    rows = []
    for alpha in alphas:
        prediction = orbit_prediction(config, alpha)
        spectrum = build_spectrum(config, alpha=alpha, K=K)
        lo = prediction.L - half_width - FIT_MARGIN
        hi = prediction.L + half_width + FIT_MARGIN
        samples = _trace_on(spectrum, config, lo, hi, K)
        fit = fit_amplitude(samples, prediction, half_width=half_width, degree=config.degree, lengths=lengths)
        rows.append({"alpha": alpha, **fit.as_dict(), "half_width": half_width})
        logger.info(f"   α={alpha:.6f}: Ĉ={fit.C_hat:.6f} (predicho {fit.C_pred:.6f})")
    return pd.DataFrame(rows)


def _torus_fit_table(config: ExperimentConfig) -> pd.DataFrame:
    lattice = lattice_of(config)
    peaks = config.torus.peaks
    hw = config.torus.half_width
    lengths = _peak_lengths(config)
    frames = []
    for theta in config.torus.sweep:
        A0 = torus_potential(lattice, theta)
        spectrum = build_spectrum(config, A0=A0)
        samples = _trace_on(spectrum, config, min(lengths) - hw - FIT_MARGIN, max(lengths) + hw + FIT_MARGIN, config.K)
        table = torus_peak_weights(samples, lattice, A0, peaks, hw, config.torus.genericity_bound, config.degree)
        table.insert(0, "theta", theta)
        frames.append(table)
    out = pd.concat(frames, ignore_index=True)
    base = out.groupby(["m1", "m2"])["weight"].transform("first")
    out["ratio"] = out["weight"] / base
    out["expected_ratio"] = out["cos_alpha"] / out.groupby(["m1", "m2"])["cos_alpha"].transform("first")
    out["abs_error"] = (out["ratio"] - out["expected_ratio"]).abs()
    return out


def cmd_fit(config: ExperimentConfig) -> CommandResult:
    """
    Ajuste del coeficiente sobre el barrido de flujo.

    Disco/anillo: filas (alpha, C_hat, C_pred, residual, ...) más ratio =
    Ĉ(α)/Ĉ(0) y cos_alpha. Toro: pesos por pico y ratio frente al primer θ.
    """
    log_banner(logger, f"AJUSTE DE AMPLITUD ({config.kind}, K={config.K:g})", "📈")

    if config.kind == "torus":
        table = _torus_fit_table(config)
        summary = {"max_abs_error": float(table["abs_error"].max())}
    else:
        alphas = list(config.alpha)
        if not any(abs(a) < 1e-12 for a in alphas):
            alphas = [0.0] + alphas
        law = cosine_law(disk_fit_table(config, alphas, config.K))
        table = law.table
        summary = {"slope": law.slope, "intercept": law.intercept, "r_squared": law.r_squared, "max_abs_error": law.max_abs_error}

    path = _store(config).write_frame(table, "fit", config.provenance(), summary)
    logger.info(f"✅ Ajuste completado: {summary}")
    return CommandResult("fit", table, path, summary)


def beam_checks(N: int = 3, R: float = 1.0, n_samples: int = 100, seed: int = 0) -> Dict[str, Any]:
    """
    Invariantes del haz sobre la órbita N-gonal con v = 0.

    Compara F(L) con la forma cerrada, mide los defectos simplécticos,
    el determinante del Hessiano, la rama de det Z en el tercer punto
    focal, el signo resuelto y la positividad de Im M en tiempos aleatorios.
    """
    spec, z, eta = ngon_orbit(N, R, math.pi / 2 - math.pi / N, "cw")
    L = spec.length
    path = trace_ray(z, eta, L, Geometry(R))

    frame = frame_at(path, L)
    closed = closure_frame(eta.vec, N, R, v=path.v)
    frame_error = float(np.max(np.abs(frame.F - closed.F) / np.maximum(1.0, np.abs(closed.F))))

    hessian = hessian_det_at_closure(frame, eta.vec, N, R)

    focal = focal_times(path)
    winding = float("nan")
    if len(focal) >= 3:
        winding = evolve_beam(initial_beam(z, eta.vec), path, focal[2]).theta_det

    final = evolve_beam(initial_beam(z, eta.vec), path, L)
    sign = resolve_sign(final.sqrt_det_Z, stationary_sqrt_det(frame, eta.vec), N)

    rng = np.random.default_rng(seed)
    gap = 2.0 * settings.reflection_gap
    candidates = [t for t in rng.uniform(gap, L, size=4 * n_samples) if path.nearest_reflection_gap(t) > gap]
    times = sorted(candidates[:n_samples])
    state = initial_beam(z, eta.vec)
    min_im_m = float("inf")
    for t in times:
        state = evolve_beam(state, path, t)
        min_im_m = min(min_im_m, float(state.im_M_eigenvalues().min()))

    return {
        "N": N,
        "R": R,
        "L": L,
        "frame_rel_error": frame_error,
        "symplectic_defect": frame.max_symplectic_defect,
        "hessian_det": hessian.det_block,
        "hessian_closed_form": hessian.det_closed_form,
        "hessian_rel_error": hessian.relative_error,
        "v1_det": hessian.v1_det,
        "focal_times": focal,
        "winding_third_focal": winding,
        "theta_det_L": final.theta_det,
        "sign": sign.sign,
        "prefactor": sign.prefactor,
        "side": sign.side,
        "min_im_M": min_im_m,
        "samples": len(times),
    }


def cmd_beamcheck(config: ExperimentConfig) -> CommandResult:
    """Informe de invariantes del haz para la órbita ``ngon``."""
    checks = beam_checks(config.ngon, config.geometry.R)
    expected_winding = TRIANGLE_WINDING if config.ngon == 3 else float("nan")
    rows = [
        {"quantity": "frame_rel_error", "value": checks["frame_rel_error"], "expected": 0.0},
        {"quantity": "symplectic_defect", "value": checks["symplectic_defect"], "expected": 0.0},
        {"quantity": "hessian_det_re", "value": checks["hessian_det"].real, "expected": checks["hessian_closed_form"].real},
        {"quantity": "hessian_det_im", "value": checks["hessian_det"].imag, "expected": checks["hessian_closed_form"].imag},
        {"quantity": "winding_third_focal", "value": checks["winding_third_focal"], "expected": expected_winding},
        {"quantity": "sign", "value": float(checks["sign"]), "expected": -1.0 if config.ngon == 3 else float("nan")},
        {"quantity": "prefactor", "value": float(checks["prefactor"]), "expected": float(predict_singularity(config.ngon).prefactor)},
        {"quantity": "min_im_M", "value": checks["min_im_M"], "expected": float("nan")},
    ]
    table = pd.DataFrame(rows)
    summary = {"N": config.ngon, "side": checks["side"], "sign": "−" if checks["sign"] < 0 else "+"}
    path = _store(config).write_frame(table, "beamcheck", config.provenance(), summary)
    logger.info(f"✓ Haz N={config.ngon}: rama {checks['winding_third_focal'] / math.pi:.4f}π, signo {summary['sign']}")
    return CommandResult("beamcheck", table, path, summary)


def cmd_lengths(config: ExperimentConfig) -> CommandResult:
    """Espectro de longitudes hasta L_max y aislamiento de la longitud de la órbita ``ngon``."""
    geometry = Geometry(config.geometry.R, config.geometry.r0)
    L = orbit_prediction(config).L
    lengths = length_spectrum(geometry, max(config.L_max, L + 1.0))
    half_width = config.half_width or settings.fit_half_width
    report = verify_isolation(lengths, L, half_width)
    summary = {
        "L": L,
        "half_width": half_width,
        "isolated": report.passed,
        "nearest_length": report.nearest_length,
        "gap": report.nearest_distance,
        "nearest_accumulation": report.nearest_accumulation,
    }
    path = _store(config).write_frame(lengths.to_frame(), "lengths", config.provenance(), summary)
    logger.info(f"✓ L={L:.6f}: vecina más cercana {report.nearest_length} a {report.nearest_distance:.4f}")
    return CommandResult("lengths", lengths.to_frame(), path, summary)
