"""
Tests del toro plano: red dual, reducción de gauge, espectro y genericidad.
"""
import math

import numpy as np
import pytest

from src.beams.gauge import ConstantOnTorus, FourierPeriodic
from src.spectra.lattice import Lattice
from src.spectra.torus import (
    TorusProblem,
    gauge_equivalent,
    gauge_residual,
    hadamard_overlap,
    lattice_genericity,
    reduce_to_constant_gauge,
    torus_fluxes,
    torus_spectrum,
)
from src.utils.errors import ConfigError, NotCurlFree


class TestLattice:
    def test_dual_basis(self, generic_lattice):
        np.testing.assert_allclose(generic_lattice.basis @ generic_lattice.dual.T, np.eye(2), atol=1e-15)
        assert generic_lattice.cell_area == pytest.approx(1.07)

    def test_dependent_vectors_rejected(self):
        with pytest.raises(ConfigError):
            Lattice.from_vectors((1.0, 2.0), (2.0, 4.0))

    def test_enumerate_is_deterministic(self, square_lattice):
        points = list(square_lattice.enumerate(1.0))
        assert [m for m, _ in points] == [(-1, 0), (0, -1), (0, 0), (0, 1), (1, 0)]


class TestGauge:
    def test_fluxes(self, generic_lattice):
        assert torus_fluxes(generic_lattice, (0.5, 0.2)) == pytest.approx((0.5, 0.31 * 0.5 + 1.07 * 0.2))

    def test_dual_shift_is_gauge_equivalent(self, generic_lattice):
        A0 = np.array([0.4, -0.3])
        shifted = A0 + 2 * math.pi * generic_lattice.dual_vector((1, -2))
        assert gauge_equivalent(generic_lattice, A0, shifted)
        assert not gauge_equivalent(generic_lattice, A0, A0 + 0.1)

    def test_reduce_fourier_potential(self, generic_lattice):
        delta = generic_lattice.dual_vector((1, 0))
        coeff = (0.2 + 0.1j) * delta
        A = FourierPeriodic(
            generic_lattice,
            {(0, 0): np.array([0.3, -0.2]), (1, 0): coeff, (-1, 0): np.conj(coeff)},
        )
        A0, phi = reduce_to_constant_gauge(A)
        np.testing.assert_allclose(A0, [0.3, -0.2])
        points = np.random.default_rng(0).uniform(-1.0, 1.0, size=(10, 2))
        assert gauge_residual(A, A0, phi, points) < 1e-12

    def test_magnetic_field_rejected(self, generic_lattice):
        delta = generic_lattice.dual_vector((1, 0))
        coeff = 0.2 * np.array([-delta[1], delta[0]], dtype=complex)
        A = FourierPeriodic(generic_lattice, {(1, 0): coeff, (-1, 0): np.conj(coeff)})
        with pytest.raises(NotCurlFree):
            reduce_to_constant_gauge(A)

    def test_overlap_of_constant_potential(self, generic_lattice):
        A0 = np.array([0.7, 0.2])
        d = generic_lattice.vector((1, 1))
        value = hadamard_overlap(ConstantOnTorus(A0), generic_lattice, d, n_grid=4)
        expected = np.exp(1j * float(d @ A0)) * generic_lattice.cell_area
        assert value == pytest.approx(expected, rel=1e-12)


class TestSpectrum:
    def test_square_half_flux(self, square_lattice):
        spectrum = torus_spectrum(TorusProblem(square_lattice, (math.pi, 0.0)), 10.0)
        np.testing.assert_allclose(spectrum.lambdas[:2], math.pi**2, rtol=1e-15)
        assert {(r.delta1, r.delta2) for r in spectrum.table.head(2).itertuples()} == {(0, 0), (1, 0)}

    def test_gauge_shift_preserves_spectrum(self, generic_lattice):
        A0 = np.array([0.4, 0.1])
        shifted = A0 + 2 * math.pi * generic_lattice.dual_vector((1, 1))
        a = torus_spectrum(TorusProblem(generic_lattice, A0), 30.0)
        b = torus_spectrum(TorusProblem(generic_lattice, shifted), 30.0)
        assert a.same_multiset(b, rtol=1e-12)

    def test_weyl_count(self, generic_lattice):
        K = 100.0
        count = len(torus_spectrum(TorusProblem(generic_lattice), K))
        expected = generic_lattice.cell_area * K * K / (4 * math.pi)
        assert abs(count / expected - 1.0) < 0.05


class TestGenericity:
    def test_square_lattice_witness(self, square_lattice):
        report = lattice_genericity(square_lattice, 2.0)
        assert not report.passed
        assert report.witness == ((1.0, 0.0), (0.0, 1.0))

    def test_generic_lattice_passes(self, generic_lattice):
        report = lattice_genericity(generic_lattice, 10.0)
        assert report.passed
        assert report.checked > 100
