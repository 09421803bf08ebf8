"""
Tests de geometría, trazado de rayos y flujo reflejado.
"""
import math

import numpy as np
import pytest

from src.billiards.geometry import Geometry, UnitDirection, ngon_orbit
from src.billiards.rays import flow_map, reflect_direction, trace_ray
from src.utils.errors import ConfigError, InnerHit, TangentialHit

SQRT3 = math.sqrt(3.0)


class TestGeometry:
    def test_unit_direction_normalizes(self):
        eta = UnitDirection(np.array([3.0, 4.0]))
        np.testing.assert_allclose(eta.vec, [0.6, 0.8])
        np.testing.assert_allclose(eta.perp, [0.8, -0.6])

    def test_zero_direction_rejected(self):
        with pytest.raises(ConfigError):
            UnitDirection(np.zeros(2))

    @pytest.mark.parametrize("R, r0", [(1.0, 1.0), (1.0, -0.1), (0.0, 0.0)])
    def test_invalid_geometry(self, R, r0):
        with pytest.raises(ConfigError):
            Geometry(R, r0)

    def test_contains_respects_obstacle(self):
        g = Geometry(1.0, 0.2)
        assert g.contains(np.array([0.5, 0.0]))
        assert not g.contains(np.array([0.1, 0.0]))
        assert not g.contains(np.array([1.0, 0.0]))


class TestNgonOrbit:
    def test_triangle_representative(self, triangle_orbit):
        spec, z, eta = triangle_orbit
        np.testing.assert_allclose(z, [0.0, 0.5], atol=1e-15)
        np.testing.assert_allclose(eta.vec, [1.0, 0.0], atol=1e-15)
        assert spec.length == pytest.approx(3 * SQRT3, rel=1e-15)
        assert spec.chord_distance == pytest.approx(0.5)
        assert spec.curvature_gain == pytest.approx(4 * SQRT3)

    def test_orientation_flips_chord(self):
        _, z_ccw, eta_ccw = ngon_orbit(4, 1.0, 0.0, "ccw")
        _, z_cw, eta_cw = ngon_orbit(4, 1.0, 0.0, "cw")
        w_ccw = float(z_ccw @ eta_ccw.perp)
        w_cw = float(z_cw @ eta_cw.perp)
        assert w_ccw == pytest.approx(math.cos(math.pi / 4))
        assert w_cw == pytest.approx(-math.cos(math.pi / 4))

    def test_vertices_on_circle(self):
        spec, _, _ = ngon_orbit(5, 2.0)
        np.testing.assert_allclose(np.linalg.norm(spec.vertices, axis=1), 2.0)

    @pytest.mark.parametrize("N, orientation", [(1, "ccw"), (3, "up")])
    def test_invalid_orbit(self, N, orientation):
        with pytest.raises(ConfigError):
            ngon_orbit(N, 1.0, 0.0, orientation)


class TestTraceRay:
    def test_triangle_closes_after_three_reflections(self, triangle_path):
        assert len(triangle_path.events) == 3
        np.testing.assert_allclose(triangle_path.reflection_times, SQRT3 / 2 * np.array([1, 3, 5]), rtol=1e-14)
        L = triangle_path.t_max
        np.testing.assert_allclose(triangle_path.position(L), [0.0, 0.5], atol=1e-12)
        np.testing.assert_allclose(triangle_path.direction(L), [1.0, 0.0], atol=1e-12)

    def test_chord_invariant_constant(self, triangle_path):
        np.testing.assert_allclose(triangle_path.chord_invariants(), 0.5, atol=1e-14)
        assert triangle_path.chord == pytest.approx(-0.5)
        assert triangle_path.v == pytest.approx(0.0, abs=1e-15)

    def test_long_ray_keeps_chord(self):
        path = trace_ray([0.1, 0.3], UnitDirection.from_angle(0.7), 500.0, Geometry(1.0))
        invariants = path.chord_invariants()
        assert np.ptp(invariants) < 1e-12
        np.testing.assert_allclose(np.linalg.norm(path.segment_points[1:], axis=1), 1.0, atol=1e-14)

    def test_polyline_includes_endpoints(self, triangle_path):
        points = triangle_path.polyline()
        assert points.shape == (5, 2)
        np.testing.assert_allclose(points[0], points[-1], atol=1e-12)

    def test_segment_index_domain(self, triangle_path):
        assert triangle_path.segment_index(0.0) == 0
        assert triangle_path.segment_index(1.0) == 1
        with pytest.raises(ConfigError):
            triangle_path.segment_index(-0.1)
        with pytest.raises(ConfigError):
            triangle_path.segment_index(6.0)

    def test_diameter(self):
        path = trace_ray([0.0, 0.0], [1.0, 0.0], 2.5, Geometry(1.0))
        assert len(path.events) == 1
        np.testing.assert_allclose(path.position(2.5), [-0.5, 0.0], atol=1e-15)
        assert path.reflections_before(0.99) == 0
        assert path.reflections_before(1.0) == 1
        assert path.nearest_reflection_gap(1.25) == pytest.approx(0.25)

    def test_inner_obstacle_reflection(self):
        path = trace_ray([-0.5, 0.0], [1.0, 0.0], 1.0, Geometry(1.0, 0.2))
        first = path.events[0]
        assert first.boundary == "inner"
        assert first.time == pytest.approx(0.3)
        np.testing.assert_allclose(first.outgoing, [-1.0, 0.0], atol=1e-15)

    def test_inner_hit_forbidden(self):
        with pytest.raises(InnerHit):
            trace_ray([-0.5, 0.0], [1.0, 0.0], 1.0, Geometry(1.0, 0.2), forbid_inner=True)

    @pytest.mark.parametrize("z, t_max", [([0.0, 0.5], 0.0), ([2.0, 0.0], 1.0)])
    def test_invalid_arguments(self, z, t_max):
        with pytest.raises(ConfigError):
            trace_ray(z, [1.0, 0.0], t_max, Geometry(1.0))


class TestReflection:
    def test_normal_incidence(self):
        out = reflect_direction([1.0, 0.0], [1.0, 0.0])
        np.testing.assert_allclose(out.vec, [-1.0, 0.0])

    def test_tangential_hit(self):
        with pytest.raises(TangentialHit):
            reflect_direction([0.0, 1.0], [1.0, 0.0])

    def test_flow_map_homogeneity(self, triangle_orbit):
        _, z, eta = triangle_orbit
        x1, xi1 = flow_map(z, eta.vec, 2.0, Geometry(1.0))
        x2, xi2 = flow_map(z, 2.0 * eta.vec, 2.0, Geometry(1.0))
        np.testing.assert_allclose(x1, x2, atol=1e-14)
        np.testing.assert_allclose(2.0 * xi1, xi2, atol=1e-14)

    def test_flow_map_at_zero(self, triangle_orbit):
        _, z, eta = triangle_orbit
        x, xi = flow_map(z, eta.vec, 0.0, Geometry(1.0))
        np.testing.assert_array_equal(x, z)
        np.testing.assert_array_equal(xi, eta.vec)
