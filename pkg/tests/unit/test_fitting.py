"""
Tests del ajuste de amplitud, el aislamiento y la ley del coseno.
"""
import math

import numpy as np
import pandas as pd
import pytest

from src.billiards.geometry import Geometry
from src.billiards.lengths import length_spectrum
from src.spectra.disk import DiskFluxProblem, disk_flux_spectrum
from src.trace.fitting import (
    choose_half_width,
    compare_sides,
    cosine_law,
    fit_amplitude,
    verify_isolation,
)
from src.trace.model import bandlimited_model
from src.trace.prediction import predict_singularity
from src.trace.wave_trace import TraceSamples, bandlimited_trace
from src.trace.window import WindowSpec, time_grid
from src.utils.errors import ConfigError, IsolationViolation

TRIANGLE_L = 3 * math.sqrt(3)
SQUARE_L = 4 * math.sqrt(2)


@pytest.fixture(scope="module")
def unit_lengths():
    return length_spectrum(Geometry(1.0), 8.0)


@pytest.fixture(scope="module")
def planted():
    """Traza sintética: −0.2327·(t − L)₊^{−3/2} de banda limitada más fondo lineal."""
    window = WindowSpec(40.0)
    prediction = predict_singularity(3).with_coefficient(-0.2327)
    grid = time_grid(prediction.L - 0.35, prediction.L + 0.35, window.K)
    values = bandlimited_model(prediction, window, grid) + 0.4 - 0.15 * (grid - prediction.L)
    return TraceSamples(grid, values, window, {"kind": "synthetic"}), prediction


class TestIsolation:
    def test_triangle_isolated_at_default_width(self, unit_lengths):
        report = verify_isolation(unit_lengths, TRIANGLE_L, 0.3)
        assert report.passed
        assert report.nearest_length == pytest.approx(SQUARE_L)
        assert report.nearest_distance == pytest.approx(SQUARE_L - TRIANGLE_L, abs=1e-12)
        assert report.nearest_accumulation == pytest.approx(2 * math.pi)

    def test_wide_window_fails(self, unit_lengths):
        assert not verify_isolation(unit_lengths, TRIANGLE_L, 0.5).passed

    def test_obstacle_family_overlap(self):
        lengths = length_spectrum(Geometry(1.0, 0.2), 8.0)
        report = verify_isolation(lengths, TRIANGLE_L, 0.3)
        assert report.obstacle_overlap
        assert not report.passed

    def test_square_window_is_narrowed(self, unit_lengths):
        pentagon = 10 * math.sin(math.pi / 5)
        assert choose_half_width(unit_lengths, SQUARE_L) == pytest.approx(0.9 * (pentagon - SQUARE_L), rel=1e-12)
        assert choose_half_width(unit_lengths, TRIANGLE_L) == 0.3


class TestFitAmplitude:
    def test_planted_coefficient_recovered(self, planted):
        samples, prediction = planted
        fit = fit_amplitude(samples, prediction, half_width=0.3, degree=1)
        assert fit.C_hat == pytest.approx(-0.2327, rel=1e-8)
        assert fit.background[0] == pytest.approx(0.4, abs=1e-8)
        assert fit.background[1] == pytest.approx(-0.15 * 0.3, abs=1e-8)
        assert fit.residual < 1e-8
        assert fit.t_lo >= prediction.L - 0.3 and fit.t_hi <= prediction.L + 0.3

    def test_correct_side_preferred(self, planted):
        samples, prediction = planted
        comparison = compare_sides(samples, prediction, half_width=0.3, degree=1)
        assert comparison.preferred == "plus"
        assert comparison.winner.C_hat == pytest.approx(-0.2327, rel=1e-8)
        assert comparison.minus.residual > 100 * comparison.plus.residual

    def test_as_dict_row(self, planted):
        samples, prediction = planted
        row = fit_amplitude(samples, prediction, half_width=0.3).as_dict()
        assert "background" not in row and "isolation" not in row
        assert row["relative_error"] == pytest.approx(0.0, abs=1e-7)

    def test_isolation_enforced(self, planted, unit_lengths):
        samples, _ = planted
        with pytest.raises(IsolationViolation):
            fit_amplitude(samples, predict_singularity(4), half_width=0.3, lengths=unit_lengths)

    @pytest.mark.parametrize("half_width", [0.0, 0.4])
    def test_half_width_range(self, planted, half_width):
        samples, prediction = planted
        with pytest.raises(ConfigError):
            fit_amplitude(samples, prediction, half_width=half_width)

    def test_too_few_points(self, planted):
        samples, prediction = planted
        with pytest.raises(ConfigError):
            fit_amplitude(samples, prediction, half_width=0.01, degree=4)


class TestCosineLaw:
    def test_exact_cosine(self):
        alphas = [0.0, math.pi / 3, math.pi / 2, math.pi]
        rows = pd.DataFrame({"alpha": alphas, "C_hat": [-0.23 * math.cos(a) for a in alphas]})
        law = cosine_law(rows)
        assert law.slope == pytest.approx(1.0)
        assert law.intercept == pytest.approx(0.0, abs=1e-12)
        assert law.r_squared == pytest.approx(1.0)
        assert law.max_abs_error < 1e-12
        assert list(law.table.columns[-3:]) == ["ratio", "cos_alpha", "abs_error"]

    def test_requires_zero_flux(self):
        with pytest.raises(ConfigError):
            cosine_law(pd.DataFrame({"alpha": [0.5], "C_hat": [0.1]}))

    def test_requires_columns(self):
        with pytest.raises(ConfigError):
            cosine_law(pd.DataFrame({"alpha": [0.0]}))


class TestDiskData:
    """Ajustes sobre trazas reales del disco unidad con K moderado."""

    K = 40.0
    SWEEP = [0.0, math.pi / 3, math.pi / 2, 2 * math.pi / 3, math.pi]

    @pytest.fixture(scope="class")
    def spectra(self):
        return {alpha: disk_flux_spectrum(DiskFluxProblem(alpha=alpha), self.K, threads=1) for alpha in self.SWEEP}

    def _samples(self, spectrum, L, half_width):
        window = WindowSpec(self.K)
        grid = time_grid(L - half_width - 0.05, L + half_width + 0.05, self.K)
        return bandlimited_trace(spectrum, window, grid, threads=1)

    @pytest.mark.parametrize("N, side", [(3, "plus"), (4, "minus")])
    def test_side_discrimination(self, spectra, unit_lengths, N, side):
        prediction = predict_singularity(N)
        hw = choose_half_width(unit_lengths, prediction.L)
        samples = self._samples(spectra[0.0], prediction.L, hw)
        comparison = compare_sides(samples, prediction, half_width=hw, lengths=unit_lengths)
        assert comparison.preferred == side
        assert comparison.winner.C_hat < 0.0

    def test_cosine_law_sweep(self, spectra, unit_lengths):
        rows = []
        for alpha in self.SWEEP:
            prediction = predict_singularity(3, 1.0, alpha)
            samples = self._samples(spectra[alpha], prediction.L, 0.3)
            fit = fit_amplitude(samples, prediction, half_width=0.3, lengths=unit_lengths)
            rows.append({"alpha": alpha, "C_hat": fit.C_hat})
        law = cosine_law(pd.DataFrame(rows))
        assert law.r_squared > 0.99
        assert law.slope == pytest.approx(1.0, abs=0.1)
