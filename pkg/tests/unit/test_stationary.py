"""
Tests de la fase estacionaria al cierre: Hessiano aumentado, rama de la raíz
y resolución del signo de la singularidad.
"""
import math

import numpy as np
import pytest

from src.beams.stationary import (
    hessian_det_at_closure,
    reduced_phase_hessian,
    resolve_sign,
    sqrt_det_branch_stationary,
    stationary_sqrt_det,
)
from src.billiards.jacobi import closure_frame, frame_at
from src.utils.errors import BranchDomainError, SingularHessian

ETA = np.array([1.0, 0.0])


class TestBranch:
    @pytest.mark.parametrize(
        "Q, expected",
        [
            (np.eye(2), 1j),
            (np.diag([1.0, -1.0]), 1.0),
            (1j * np.eye(2), 1.0),
        ],
    )
    def test_known_values(self, Q, expected):
        assert sqrt_det_branch_stationary(Q) == pytest.approx(expected, abs=1e-14)

    def test_zero_eigenvalue(self):
        with pytest.raises(SingularHessian):
            sqrt_det_branch_stationary(np.diag([1.0, 0.0]))

    def test_outside_continuation_domain(self):
        with pytest.raises(BranchDomainError):
            sqrt_det_branch_stationary(np.diag([-1j, 1.0]))


class TestHessian:
    @pytest.mark.parametrize("N", [3, 4, 5])
    def test_closed_form_determinant(self, N):
        frame = closure_frame(ETA, N, 1.0)
        report = hessian_det_at_closure(frame, ETA, N, 1.0)
        kappa = 4.0 * N / (2.0 * math.sin(math.pi / N))
        assert report.det_closed_form == pytest.approx(-kappa)
        assert report.relative_error < 1e-10

    def test_triangle_from_traced_frame(self, triangle_path):
        frame = frame_at(triangle_path, triangle_path.t_max)
        report = hessian_det_at_closure(frame, triangle_path.eta.vec, 3, 1.0)
        assert report.det_block == pytest.approx(-4.0 * math.sqrt(3.0), abs=1e-6)
        assert report.relative_error < 1e-6

    def test_orbit_direction_decouples(self):
        Q = reduced_phase_hessian(closure_frame(ETA, 3, 1.0), ETA)
        assert Q.shape == (3, 3)
        np.testing.assert_allclose(Q, Q.T, atol=1e-8)


class TestSign:
    def test_triangle_sign_is_negative(self, triangle_path):
        stationary = stationary_sqrt_det(closure_frame(ETA, 3, 1.0), ETA)
        assert stationary == pytest.approx(1.0, abs=1e-6)
        data = resolve_sign(-1.0 + 0j, stationary, 3)
        assert data.sign == -1
        assert data.prefactor == -1
        assert data.side == "plus"

    @pytest.mark.parametrize(
        "N, sign, prefactor, side",
        [(3, -1, -1, "plus"), (4, 1, -1, "minus"), (5, -1, 1, "plus"), (6, 1, 1, "minus")],
    )
    def test_total_factor(self, N, sign, prefactor, side):
        data = resolve_sign(complex(sign), 1.0 + 0j, N)
        assert data.sign == sign
        assert data.sigma == pytest.approx(1j ** (N - 1))
        assert data.prefactor == prefactor
        assert data.side == side

    def test_without_N(self):
        data = resolve_sign(2.0 + 0j, 1.0 + 0j)
        assert data.sign == 1
        assert data.prefactor is None
