"""
Tests de funciones de Bessel de orden real y de sus ceros.
"""
import math

import numpy as np
import pytest

from src.spectra.bessel import (
    bessel_j,
    bessel_j_series,
    bessel_j_zeros,
    bessel_y,
    mcmahon_count,
    zeros_interlace,
)
from src.utils.errors import DomainError

J0_FIRST_ZEROS = [2.404825557695773, 5.520078110286311, 8.653727912911013]


def test_value_at_origin():
    assert bessel_j(0.0, 0.0) == 1.0
    assert bessel_j(1.5, 0.0) == 0.0


@pytest.mark.parametrize("nu, x", [(0.0, 3.1), (2.5, 7.3), (0.3, 0.01), (11.2, 9.0)])
def test_series_oracle(nu, x):
    assert bessel_j_series(nu, x) == pytest.approx(bessel_j(nu, x), abs=1e-12)


def test_half_integer_order_zeros_are_multiples_of_pi():
    zeros = bessel_j_zeros(0.5, 40.0)
    np.testing.assert_allclose(zeros, math.pi * np.arange(1, 13), atol=1e-12)


def test_first_zeros_of_j0():
    np.testing.assert_allclose(bessel_j_zeros(0.0, 9.0), J0_FIRST_ZEROS, atol=1e-12)


def test_no_zeros_below_order():
    assert bessel_j_zeros(12.0, 12.0).size == 0
    assert bessel_j_zeros(12.0, 20.0)[0] == pytest.approx(16.69824993, rel=1e-8)


@pytest.mark.parametrize("nu", [0.0, 0.35, 1.3, 7.5])
def test_zeros_interlace(nu):
    assert zeros_interlace(bessel_j_zeros(nu, 30.0), bessel_j_zeros(nu + 1.0, 30.0))


def test_interlace_detects_violation():
    assert not zeros_interlace(np.array([1.0, 2.0]), np.array([2.5, 3.0]))


def test_mcmahon_count_for_small_order():
    assert mcmahon_count(0.0, 30.0) == len(bessel_j_zeros(0.0, 30.0)) == 9


@pytest.mark.parametrize("nu, x", [(-0.5, 1.0), (500.0, 1.0), (1.0, 401.0), (1.0, -1.0)])
def test_domain_errors(nu, x):
    with pytest.raises(DomainError):
        bessel_j(nu, x)


def test_second_kind_requires_positive_argument():
    with pytest.raises(DomainError):
        bessel_y(1.0, 0.0)
    assert bessel_y(0.0, 1.0) == pytest.approx(0.08825696421567697, rel=1e-12)
