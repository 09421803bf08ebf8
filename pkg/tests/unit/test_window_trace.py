"""
Tests de la ventana espectral y de la traza de banda limitada.
"""
import math

import numpy as np
import pandas as pd
import pytest

from src.spectra.disk import DiskFluxProblem, disk_flux_spectrum
from src.spectra.spectrum import Spectrum
from src.trace.wave_trace import bandlimited_trace
from src.trace.window import WindowSpec, chi, time_grid
from src.utils.errors import ConfigError, IncompleteSpectrum


class TestWindow:
    @pytest.mark.parametrize("s, expected", [(0.0, 1.0), (0.5, 1.0), (0.75, 0.5), (1.0, 0.0), (3.0, 0.0)])
    def test_values(self, s, expected):
        assert chi(s) == pytest.approx(expected, abs=1e-15)

    @pytest.mark.parametrize("s0", [0.5, 1.0])
    def test_continuous_derivative(self, s0):
        h = 1e-7
        left = (chi(s0) - chi(s0 - h)) / h
        right = (chi(s0 + h) - chi(s0)) / h
        assert abs(left - right) < 1e-5

    def test_array_input(self):
        np.testing.assert_allclose(chi(np.array([0.2, 0.75, 2.0])), [1.0, 0.5, 0.0])

    def test_window_spec(self):
        window = WindowSpec(40.0)
        assert window.plateau == 20.0
        assert window.max_spacing == pytest.approx(math.pi / 160)
        assert window.weights(30.0) == pytest.approx(0.5)
        with pytest.raises(ConfigError):
            WindowSpec(0.0)

    def test_time_grid_spacing(self):
        grid = time_grid(5.0, 5.4, 80.0)
        assert grid[0] == 5.0 and grid[-1] == 5.4
        assert np.diff(grid).max() <= math.pi / 320 + 1e-15
        with pytest.raises(ConfigError):
            time_grid(1.0, 1.0, 80.0)


class TestTrace:
    def test_value_at_zero_is_weight_sum(self, disk_spectrum_k20):
        samples = bandlimited_trace(disk_spectrum_k20, WindowSpec(20.0), np.array([0.0, 1.0]))
        assert samples.values[0] == pytest.approx(samples.weight_sum, rel=1e-15)
        assert abs(samples.values[1]) <= samples.weight_sum
        assert samples.provenance["kind"] == "disk"

    def test_independent_of_thread_count(self, disk_spectrum_k20):
        grid = time_grid(0.0, 6.0, 20.0)
        single = bandlimited_trace(disk_spectrum_k20, WindowSpec(20.0), grid, threads=1)
        multi = bandlimited_trace(disk_spectrum_k20, WindowSpec(20.0), grid, threads=4)
        np.testing.assert_array_equal(single.values, multi.values)

    def test_window_beyond_cutoff_rejected(self, disk_spectrum_k20):
        with pytest.raises(IncompleteSpectrum):
            bandlimited_trace(disk_spectrum_k20, WindowSpec(25.0), np.array([0.0]))

    def test_restrict_and_frame(self, disk_spectrum_k20):
        grid = time_grid(0.0, 2.0, 20.0)
        samples = bandlimited_trace(disk_spectrum_k20, WindowSpec(20.0), grid)
        part = samples.restrict(0.5, 1.0)
        assert part.t.min() >= 0.5 and part.t.max() <= 1.0
        frame = samples.to_frame()
        assert list(frame.columns) == ["t", "value"]
        assert len(frame) == len(grid)

    def test_linear_in_spectrum(self, disk_spectrum_k20):
        window = WindowSpec(20.0)
        grid = time_grid(4.8, 5.6, 20.0)
        table = disk_spectrum_k20.table

        def part(rows):
            return Spectrum(rows.reset_index(drop=True), 20.0, True, "disk")

        full = bandlimited_trace(disk_spectrum_k20, window, grid).values
        split = (
            bandlimited_trace(part(table.iloc[::2]), window, grid).values
            + bandlimited_trace(part(table.iloc[1::2]), window, grid).values
        )
        doubled = bandlimited_trace(part(pd.concat([table, table])), window, grid).values
        np.testing.assert_allclose(split, full, rtol=0.0, atol=1e-12)
        np.testing.assert_array_equal(doubled, 2.0 * full)

    def test_flux_parity(self):
        window = WindowSpec(15.0)
        grid = time_grid(5.0, 5.4, 15.0)
        plus = bandlimited_trace(disk_flux_spectrum(DiskFluxProblem(alpha=0.9), 15.0, threads=1), window, grid)
        minus = bandlimited_trace(disk_flux_spectrum(DiskFluxProblem(alpha=-0.9), 15.0, threads=1), window, grid)
        np.testing.assert_allclose(minus.values, plus.values, rtol=1e-12, atol=1e-12)
