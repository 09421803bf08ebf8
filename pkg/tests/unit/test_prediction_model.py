"""
Tests de la predicción cerrada y de los perfiles de banda limitada.
"""
import math

import numpy as np
import pytest
from scipy.integrate import quad

from src.trace.model import bandlimited_model, frequency_integral, poisson_shape, singularity_shape
from src.trace.prediction import ngon_prefactor, predict_singularity, predict_torus_peak
from src.trace.window import WindowSpec
from src.utils.errors import ConfigError


class TestPrediction:
    def test_triangle(self):
        pred = predict_singularity(3, 1.0, 0.0)
        assert pred.L == pytest.approx(3 * math.sqrt(3))
        assert pred.C == pytest.approx(-(2.0**-2.5) * 3.0**0.25, rel=1e-12)
        assert pred.side == "plus"
        assert pred.flux_factor == 2.0

    def test_square(self):
        pred = predict_singularity(4)
        assert pred.L == pytest.approx(4 * math.sqrt(2))
        assert pred.C == pytest.approx(-0.25 * math.sin(math.pi / 4) ** 1.5, rel=1e-12)
        assert pred.side == "minus"

    @pytest.mark.parametrize("N, expected", [(2, 1), (3, -1), (4, -1), (5, 1), (6, 1), (7, -1)])
    def test_prefactor(self, N, expected):
        assert ngon_prefactor(N) == expected

    def test_cosine_dependence(self):
        base = predict_singularity(5, 1.0, 0.0)
        assert base.C > 0.0
        assert predict_singularity(5, 1.0, math.pi / 3).C == pytest.approx(0.5 * base.C)
        assert predict_singularity(5, 1.0, math.pi / 2).C == 0.0
        assert predict_singularity(5, 1.0, math.pi).C == pytest.approx(-base.C)

    def test_radius_scaling(self):
        assert predict_singularity(3, 2.0).C == pytest.approx(2.0**1.5 * predict_singularity(3, 1.0).C)

    def test_with_coefficient(self):
        pred = predict_singularity(3).with_coefficient(-0.2327)
        assert pred.C == -0.2327
        assert pred.as_dict()["N"] == 3

    @pytest.mark.parametrize("N, R", [(1, 1.0), (3, 0.0)])
    def test_invalid(self, N, R):
        with pytest.raises(ConfigError):
            predict_singularity(N, R)

    def test_torus_peak(self):
        pred = predict_torus_peak(1.0, math.pi / 3, cell_area=1.07)
        assert pred.C == pytest.approx(1.07 / math.pi * 0.5)
        assert pred.N == 0
        assert predict_torus_peak(1.0, 0.0).C == 1.0


class TestModel:
    def test_frequency_integral_at_zero_is_real(self):
        B = frequency_integral(0.0, 10.0)
        assert B.imag == 0.0
        assert B.real > (2.0 / 3.0) * 5.0**1.5

    def test_sides_are_mirror_images(self):
        window = WindowSpec(30.0)
        L = 3 * math.sqrt(3)
        s = np.array([0.05, 0.17, 0.3])
        plus = singularity_shape(L, "plus", window, L + s)
        minus = singularity_shape(L, "minus", window, L - s)
        np.testing.assert_allclose(plus, minus, rtol=1e-7, atol=1e-6)

    def test_unknown_side(self):
        with pytest.raises(ConfigError):
            singularity_shape(1.0, "both", WindowSpec(10.0), [1.0])

    def test_model_is_linear_in_coefficient(self):
        window = WindowSpec(20.0)
        pred = predict_singularity(3)
        grid = [pred.L - 0.1, pred.L + 0.1]
        np.testing.assert_allclose(
            bandlimited_model(pred, window, grid),
            pred.trace_coefficient * singularity_shape(pred.L, "plus", window, grid),
        )

    def test_trace_scale(self):
        pred = predict_singularity(3)
        assert pred.trace_scale == 2.0
        assert pred.trace_coefficient == pytest.approx(2.0 * pred.C)
        assert pred.with_coefficient(-0.2).trace_scale == 2.0
        assert predict_torus_peak(1.0, 0.0).trace_coefficient == 1.0

    def test_pairing_with_gaussian(self):
        # <s₊^{-3/2}, f> = 4 ∫₀^∞ f'(u²) du para f gaussiana
        sigma = 0.5
        window = WindowSpec(40.0)
        s = np.linspace(-4.0, 4.0, 161)
        f = np.exp(-(s**2) / (2 * sigma**2))
        shape = singularity_shape(0.0, "plus", window, s)
        paired = float(np.sum(shape * f) * (s[1] - s[0]))

        def fprime(x):
            return -x / sigma**2 * math.exp(-(x**2) / (2 * sigma**2))

        expected, _ = quad(lambda u: 4.0 * fprime(u * u), 0.0, math.inf, epsabs=1e-13)
        assert paired == pytest.approx(expected, rel=1e-6)

    def test_poisson_shape_at_origin(self):
        K = 10.0
        value = poisson_shape(0.0, WindowSpec(K), [0.0])[0]
        assert value == pytest.approx(K * K * (5.0 / 16.0 - 1.0 / (4.0 * math.pi**2)), rel=1e-8)

    def test_poisson_shape_is_even(self):
        window = WindowSpec(15.0)
        np.testing.assert_array_equal(poisson_shape(1.0, window, [0.7]), poisson_shape(1.0, window, [-0.7]))
