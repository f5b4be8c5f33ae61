"""Tests for conformally rescaled extrinsic geometry and slice traces."""

import numpy as np
import pytest

from curv.conformal import (
    conformal_point,
    conformal_shape,
    conformal_slice_trace,
    mean_curvature_euclid,
    mean_curvature_spherical,
    normal_derivative,
    slice_trace_from_ambient,
    spherical_phi,
)
from curv.errors import ConformalFactorError
from curv.fields import Constant, Paraboloid, SphereCap, random_trig_field
from curv.graphgeom import extrinsic_point, flat_base, slice_frame_of_point
from curv.metrics import constant_ambient, spherical_ambient


class TestSphericalFactor:
    def test_value_and_gradient(self):
        phi, grad = spherical_phi(np.array([0.0, 0.0, 0.0]))
        assert phi == pytest.approx(0.5)
        assert np.array_equal(grad, np.zeros(3))
        phi2, grad2 = spherical_phi(np.array([1.0, 0.0, 1.0]))
        assert phi2 == pytest.approx(1.5)
        assert np.array_equal(grad2, np.array([1.0, 0.0, 1.0]))

    def test_normal_derivative_pairs_coordinates(self):
        pt = extrinsic_point(Paraboloid(2), flat_base(2), np.array([1.0, 0.0]))
        amb = spherical_ambient(2)
        pj = amb.phi(np.array([1.0, 0.0]), pt.u)
        mu = normal_derivative(pt, pj)
        # nu = (-1, 0, 1)/sqrt(2), grad phi = (x, t): mu = (-1 + 0.5)/sqrt(2)
        assert mu == pytest.approx((-1.0 + 0.5) / np.sqrt(2.0))


class TestConformalShape:
    def test_rejects_nonpositive_factor(self):
        pt = extrinsic_point(Paraboloid(2), flat_base(2), np.array([0.5, 0.0]))
        with pytest.raises(ConformalFactorError):
            conformal_shape(pt, -1.0, 0.0)

    def test_constant_factor_scales(self):
        field = random_trig_field(2, seed=1)
        x = np.array([0.3, -0.2])
        pt = extrinsic_point(field, flat_base(2), x)
        cp = conformal_point(field, constant_ambient(2, 2.5), x)
        assert cp.mean_curvature == pytest.approx(2.5 * pt.mean_curvature, abs=1e-12)
        assert np.allclose(cp.principal, 2.5 * np.sort(pt.principal), atol=1e-12)
        assert cp.scalar_curvature is None

    def test_unit_factor_is_identity(self):
        field = random_trig_field(2, seed=2)
        x = np.array([0.1, 0.4])
        pt = extrinsic_point(field, flat_base(2), x)
        cp = conformal_point(field, constant_ambient(2, 1.0), x)
        assert cp.mean_curvature == pytest.approx(pt.mean_curvature, abs=1e-14)
        assert cp.norm_a2 == pytest.approx(pt.norm_a2, abs=1e-14)


class TestSphericalMeanCurvature:
    def test_equator_disk_is_minimal(self):
        # the graph u = 0 sits on a totally geodesic equatorial ball
        field = Constant(2, 0.0)
        amb = spherical_ambient(2)
        rng = np.random.default_rng(3)
        for _ in range(25):
            x = rng.uniform(-0.9, 0.9, size=2)
            cp = conformal_point(field, amb, x)
            assert abs(cp.mean_curvature) <= 1e-12
            assert abs(mean_curvature_spherical(field, x)) <= 1e-12

    def test_hemisphere_is_minimal(self):
        field = SphereCap(2, 1.0)
        amb = spherical_ambient(2)
        rng = np.random.default_rng(4)
        for _ in range(25):
            x = 0.9 * rng.uniform(-1.0, 1.0, size=2) / np.sqrt(2.0)
            cp = conformal_point(field, amb, x)
            assert abs(cp.mean_curvature) <= 1e-10
            assert abs(mean_curvature_spherical(field, x)) <= 1e-10

    def test_routes_agree_on_random_fields(self):
        amb = spherical_ambient(2)
        for seed in range(6):
            field = random_trig_field(2, seed=seed)
            rng = np.random.default_rng(seed + 50)
            for _ in range(8):
                x = rng.uniform(-0.8, 0.8, size=2)
                direct = mean_curvature_spherical(field, x)
                routed = conformal_point(field, amb, x).mean_curvature
                assert abs(direct - routed) <= 1e-8 * max(1.0, abs(direct))

    def test_flat_route_is_trace(self):
        field = random_trig_field(2, seed=9)
        x = np.array([0.2, -0.5])
        pt = extrinsic_point(field, flat_base(2), x)
        assert mean_curvature_euclid(field, x) == pytest.approx(
            pt.mean_curvature, abs=1e-13
        )

    def test_geodesic_sphere_has_constant_mean_curvature(self):
        # centered geodesic sphere: u = c + sqrt(rho^2 - |x|^2)
        field = SphereCap(2, 0.6, height=0.3)
        amb = spherical_ambient(2)
        rng = np.random.default_rng(5)
        values = []
        for _ in range(20):
            x = 0.5 * rng.uniform(-1.0, 1.0, size=2) / np.sqrt(2.0)
            values.append(conformal_point(field, amb, x).mean_curvature)
        values = np.asarray(values)
        assert np.allclose(values, -73.0 / 60.0, atol=1e-10)

    def test_round_scalar_curvature(self):
        field = SphereCap(2, 1.0)
        amb = spherical_ambient(2)
        cp = conformal_point(field, amb, np.array([0.3, 0.2]))
        # minimal umbilic-free hemisphere in the round 3-sphere: R = n(n-1) = 2
        assert cp.scalar_curvature == pytest.approx(2.0, abs=1e-10)


class TestSliceTrace:
    def frame_point(self, seed=11):
        field = random_trig_field(2, seed=seed)
        x = np.array([0.4, 0.2])
        pt = extrinsic_point(field, flat_base(2), x)
        frame = slice_frame_of_point(pt, eps=pt.u)
        return field, x, pt, frame

    def test_residual_small_with_independent_sides(self):
        amb = spherical_ambient(2)
        for seed in (11, 12, 13):
            field, x, pt, frame = self.frame_point(seed)
            trace = slice_trace_from_ambient(frame, pt, amb)
            assert trace.residual <= 1e-10
            assert trace.trace_residual <= 1e-10

    def test_three_dimensions(self):
        field = random_trig_field(3, seed=14)
        x = np.array([0.3, -0.1, 0.2])
        pt = extrinsic_point(field, flat_base(3), x)
        frame = slice_frame_of_point(pt, eps=pt.u)
        trace = slice_trace_from_ambient(frame, pt, spherical_ambient(3))
        assert trace.minor_bar.shape == (2, 2)
        assert trace.residual <= 1e-9

    def test_exact_when_normal_derivative_implied(self):
        field, x, pt, frame = self.frame_point()
        amb = spherical_ambient(2)
        pj = amb.phi(x, pt.u)
        dphi_eta = float(pj.grad_x @ frame.eta)
        trace = conformal_slice_trace(frame, pt, pj.value, dphi_eta, pj.dt)
        assert trace.residual <= 1e-12

    def test_unit_factor_reduces_to_plain_minor(self):
        field, x, pt, frame = self.frame_point()
        amb = constant_ambient(2, 1.0)
        trace = slice_trace_from_ambient(frame, pt, amb)
        assert np.allclose(trace.abar_sigma, frame.a_sigma, atol=1e-14)
        assert trace.hbar_sigma == pytest.approx(frame.h_sigma, abs=1e-13)
        assert trace.residual <= 1e-12
