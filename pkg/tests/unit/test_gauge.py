"""
Tests de potenciales de campo nulo y holonomías.
"""
import math

import numpy as np
import pytest

from src.beams.gauge import ConstantOnTorus, FourierPeriodic, IdealFlux, flux_factor, holonomy, orbit_path
from src.utils.errors import ConfigError, NonClosedPath, SingularGauge


@pytest.mark.parametrize("N", [3, 4, 5])
def test_holonomy_depends_on_orientation(N):
    gauge = IdealFlux(0.7)
    assert holonomy(gauge, orbit_path(N, 1.0, 0.0, "ccw")) == pytest.approx(0.7, abs=1e-12)
    assert holonomy(gauge, orbit_path(N, 1.0, 0.0, "cw")) == pytest.approx(-0.7, abs=1e-12)


def test_loop_not_enclosing_flux():
    loop = np.array([[0.5, 0.0], [0.8, 0.0], [0.6, 0.3], [0.5, 0.0]])
    assert holonomy(IdealFlux(1.3), loop) == pytest.approx(0.0, abs=1e-15)


def test_open_path_rejected():
    with pytest.raises(NonClosedPath):
        holonomy(IdealFlux(1.0), np.array([[0.5, 0.0], [0.0, 0.5], [-0.5, 0.0]]))


def test_segment_through_flux_rejected():
    with pytest.raises(SingularGauge):
        IdealFlux(1.0).segment_integral(np.array([-0.5, 0.0]), np.array([0.5, 0.0]))


@pytest.mark.parametrize("alpha", [0.0, math.pi / 3, math.pi / 2, math.pi])
def test_flux_factor_is_twice_cosine(alpha):
    value = flux_factor(IdealFlux(alpha), 3)
    assert value.real == pytest.approx(2.0 * math.cos(alpha), abs=1e-12)
    assert value.imag == pytest.approx(0.0, abs=1e-12)


def test_ideal_flux_is_curl_free():
    assert IdealFlux(2.0).curl([0.3, 0.4]) == pytest.approx(0.0, abs=1e-6)


def test_constant_on_torus_segment():
    gauge = ConstantOnTorus(np.array([0.3, -1.2]))
    assert gauge.segment_integral(np.zeros(2), np.array([2.0, 1.0])) == pytest.approx(-0.6)


def test_fourier_periodic_requires_hermitian(generic_lattice):
    with pytest.raises(ConfigError):
        FourierPeriodic(generic_lattice, {(1, 0): np.array([1.0, 0.0]), (-1, 0): np.array([2.0, 0.0])})


def test_fourier_periodic_line_integral_of_gradient(generic_lattice):
    # A = ∇φ sin parte constante: la integral depende solo de los extremos
    delta = generic_lattice.dual_vector((1, 0))
    coeff = 0.2 * delta.astype(complex) * 1j
    gauge = FourierPeriodic(generic_lattice, {(1, 0): coeff, (-1, 0): np.conj(coeff)})
    p0, p1 = np.array([0.1, 0.2]), np.array([0.1, 0.2]) + generic_lattice.vector((1, 0))
    assert gauge.segment_integral(p0, p1) == pytest.approx(0.0, abs=1e-9)


@pytest.fixture
def star_loop():
    rng = np.random.default_rng(7)
    angles = 2 * math.pi * (np.arange(9) + rng.uniform(0.0, 0.5, 9)) / 9
    radii = rng.uniform(0.3, 0.9, 9)
    points = np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])
    return np.vstack([points, points[:1]])


@pytest.mark.parametrize("gauge", [IdealFlux(0.9), ConstantOnTorus([0.4, -1.3])], ids=["ideal", "constant"])
def test_holonomy_is_additive_over_concatenation(gauge, star_loop):
    total = holonomy(gauge, star_loop)
    for k in (1, 4, 7):
        parts = gauge.line_integral(star_loop[: k + 1]) + gauge.line_integral(star_loop[k:])
        assert parts == pytest.approx(total, abs=1e-12)


@pytest.mark.parametrize("gauge", [IdealFlux(0.9), ConstantOnTorus([0.4, -1.3])], ids=["ideal", "constant"])
def test_holonomy_flips_under_reversal(gauge, star_loop):
    assert holonomy(gauge, star_loop[::-1]) == pytest.approx(-holonomy(gauge, star_loop), abs=1e-12)
    open_part = star_loop[:5]
    assert gauge.line_integral(open_part[::-1]) == pytest.approx(-gauge.line_integral(open_part), abs=1e-12)


def test_star_loop_winds_once(star_loop):
    assert holonomy(IdealFlux(0.9), star_loop) == pytest.approx(0.9, abs=1e-12)
    assert holonomy(ConstantOnTorus([0.4, -1.3]), star_loop) == pytest.approx(0.0, abs=1e-12)
