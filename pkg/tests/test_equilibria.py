#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
相对平衡与固定平衡测试
"""

import numpy as np
import pytest

from core.dynamics import Configuration, integrate, momentum, random_configuration, velocity
from core.equilibria import (algebraic_fixed_gamma2, canonicalize_geodesic, equilateral_det_mu,
                             equilateral_xi, fixed_equilibrium_report, fixed_equilibrium_residual,
                             geodesic_config, geodesic_configuration, geodesic_re_residual,
                             is_fixed_equilibrium, is_relative_equilibrium, isosceles_config,
                             isosceles_fixed_gamma2, make_equilateral, re_multipliers, re_shape,
                             solve_geodesic_gamma, solve_geodesic_geometry, zero_momentum_gamma2)
from core.errors import DegenerateTriangleError, IndeterminateError, InvalidGeometryError
from core.hypgeo import coplanarity, hcross, hdistance, lift
from core.sl2 import MomentumType, classify_momentum, det_mu


class TestReMultipliers:
    def test_any_two_vortex(self, rng):
        for _ in range(20):
            assert re_multipliers(random_configuration(rng, n=2)).residual <= 1e-10

    def test_equilateral_xi(self):
        config = make_equilateral(2.0, (1.0, 1.0, 1.0))
        report = re_multipliers(config)
        assert report.residual <= 1e-10
        np.testing.assert_allclose(report.xi, momentum(config) / (2.0 * np.pi * 3.0), atol=1e-12)
        np.testing.assert_allclose(report.xi, (0.0, 0.0, 3.0 * np.sqrt(5.0 / 3.0) / (6.0 * np.pi)), atol=1e-12)
        assert report.xi[2] == pytest.approx(0.2054681, abs=1e-7)

    def test_flow_generator_reproduces_velocity(self, rng):
        for _ in range(10):
            k = rng.uniform(1.2, 4.0)
            config = make_equilateral(k, rng.uniform(0.5, 1.5, size=3) * rng.choice([-1, 1], size=3))
            report = re_multipliers(config)
            np.testing.assert_allclose(velocity(config), hcross(report.flow_generator, config.points),
                                       atol=1e-9 * max(1.0, np.max(np.abs(velocity(config)))))
            np.testing.assert_allclose(report.flow_generator, 2.0 * report.xi)

    def test_generic_configuration_is_not_re(self, rng):
        for _ in range(20):
            config = random_configuration(rng)
            if abs(coplanarity(*config.points)) < 1e-2:
                continue
            assert re_multipliers(config).residual > 1e-4

    def test_single_vortex(self):
        ok, report = is_relative_equilibrium(Configuration.from_xy([(0.4, 0.1)], [2.0]))
        assert ok
        assert report.residual <= 1e-12

    def test_report_dict(self):
        data = re_multipliers(make_equilateral(2.0, (1.0, 1.0, 1.0))).to_dict()
        assert set(data) == {"xi", "lambdas", "residual", "flow_generator"}
        assert len(data["lambdas"]) == 3


class TestEquilateral:
    def test_rejects_k_at_most_one(self):
        with pytest.raises(DegenerateTriangleError):
            make_equilateral(1.0, (1, 1, 1))

    def test_distances(self):
        config = make_equilateral(2.0, (1.0, 1.0, 1.0))
        p = config.points
        for i, j in ((0, 1), (1, 2), (0, 2)):
            assert hdistance(p[i], p[j]) == pytest.approx(np.arccosh(2.0), abs=1e-12)

    def test_small_triangle_near_apex(self):
        config = make_equilateral(1.0 + 1e-8, (1.0, 1.0, 1.0))
        np.testing.assert_allclose(config.points[:, 2], 1.0, atol=1e-7)

    def test_always_re(self, rng):
        for _ in range(20):
            gammas = rng.uniform(0.2, 2.0, size=3) * rng.choice([-1, 1], size=3)
            ok, _ = is_relative_equilibrium(make_equilateral(rng.uniform(1.1, 5.0), gammas))
            assert ok

    def test_det_mu_identity(self, rng):
        for _ in range(20):
            k = rng.uniform(1.1, 5.0)
            gammas = rng.uniform(0.2, 2.0, size=3) * rng.choice([-1, 1], size=3)
            config = make_equilateral(k, gammas)
            assert det_mu(momentum(config)) == pytest.approx(equilateral_det_mu(k, gammas), abs=1e-9 * k)

    def test_xi_helper(self):
        config = make_equilateral(2.5, (1.0, -0.4, 0.8))
        np.testing.assert_allclose(equilateral_xi(2.5, (1.0, -0.4, 0.8)), re_multipliers(config).xi, atol=1e-12)

    def test_never_fixed(self):
        assert not is_fixed_equilibrium(make_equilateral(2.0, (1.0, 1.0, 1.0)))
        assert re_shape(make_equilateral(2.0, (1.0, 1.0, 1.0))) == "equilateral"


class TestGeodesic:
    def test_geometry(self):
        geometry = geodesic_config(1.0, 2.0)
        p = geometry.points
        assert coplanarity(*p) == pytest.approx(0.0, abs=1e-14)
        assert hdistance(p[0], p[2]) == pytest.approx(np.arcsinh(1.0) + np.arcsinh(2.0), abs=1e-12)
        assert geometry.L12 == 1.0 and geometry.L23 == 4.0

    def test_isosceles_equal_legs(self):
        geometry = geodesic_config(1.5, 1.5)
        assert geometry.L12 == geometry.L23

    def test_rejects_non_positive(self):
        with pytest.raises(InvalidGeometryError):
            geodesic_config(0.0, 1.0)

    def test_residual_isosceles(self):
        g = geodesic_config(1.3, 1.3)
        assert geodesic_re_residual((1.0, 0.4, 1.0), g.L12, g.L23, g.L13) == pytest.approx(0.0, abs=1e-12)
        assert abs(geodesic_re_residual((1.0, 0.4, 2.0), g.L12, g.L23, g.L13)) > 1e-3

    def test_residual_homogeneous(self):
        g = geodesic_config(0.7, 2.1)
        base = geodesic_re_residual((1.0, 0.4, -0.3), g.L12, g.L23, g.L13)
        assert geodesic_re_residual((3.0, 1.2, -0.9), g.L12, g.L23, g.L13) == pytest.approx(3.0 * base)

    def test_solve_gamma_isosceles(self):
        assert solve_geodesic_gamma(0.8, 0.8, 1.0, 5.0) == pytest.approx(1.0, abs=1e-12)

    def test_solve_gamma_end_to_end(self):
        gamma3 = solve_geodesic_gamma(1.0, 2.0, 1.0, 1.0)
        config = geodesic_configuration(1.0, 2.0, (1.0, 1.0, gamma3))
        assert re_multipliers(config).residual <= 1e-8
        assert re_shape(config) == "geodesic"

    def test_solve_gamma_linear(self):
        assert solve_geodesic_gamma(1.0, 2.0, 2.0, -3.0) == pytest.approx(
            2.0 * solve_geodesic_gamma(1.0, 2.0, 1.0, -1.5))

    def test_solve_gamma_indeterminate(self):
        # 系数带有因子 √L₁₂ = x₁
        with pytest.raises(IndeterminateError):
            solve_geodesic_gamma(1e-14, 1.0, 1.0, 1.0)

    def test_perturbed_gamma_is_not_re(self):
        gamma3 = solve_geodesic_gamma(1.0, 2.0, 1.0, 1.0)
        ok, report = is_relative_equilibrium(geodesic_configuration(1.0, 2.0, (1.0, 1.0, gamma3 + 0.2)))
        assert not ok
        assert report.residual > 1e-6

    def test_random_geodesic_suite(self, rng):
        for _ in range(100):
            x1, x3 = rng.uniform(0.1, 3.0, size=2)
            if abs(x1 - x3) < 1e-3:
                continue
            g1, g2 = rng.uniform(0.3, 2.0, size=2) * rng.choice([-1, 1], size=2)
            try:
                g3 = solve_geodesic_gamma(x1, x3, g1, g2)
            except IndeterminateError:
                continue
            if abs(g3) < 1e-6:
                continue
            config = geodesic_configuration(x1, x3, (g1, g2, g3))
            assert re_multipliers(config).residual <= 1e-8
            assert classify_momentum(momentum(config)).type in (MomentumType.ZERO, MomentumType.ELLIPTIC)

    def test_geodesic_stays_coplanar(self):
        gamma3 = solve_geodesic_gamma(1.0, 2.0, 1.0, 1.0)
        config = geodesic_configuration(1.0, 2.0, (1.0, 1.0, gamma3))
        for s in integrate(config, 5.0, sample_dt=0.5):
            assert abs(coplanarity(*s.config.points)) <= 1e-6

    def test_solve_geometry_isosceles_root(self):
        roots = solve_geodesic_geometry((1.0, 0.3, 1.0), 1.2)
        assert any(abs(r - 1.2) < 1e-9 for r in roots)

    def test_solve_geometry_roots_are_re(self):
        roots = solve_geodesic_geometry((1.0, 1.0, 1.0), 1.0)
        assert roots
        for r in roots:
            config = geodesic_configuration(1.0, r, (1.0, 1.0, 1.0))
            assert re_multipliers(config).residual <= 1e-8

    def test_canonicalize(self, rng):
        gamma3 = solve_geodesic_gamma(0.9, 1.7, 1.0, -0.5)
        config = geodesic_configuration(0.9, 1.7, (1.0, -0.5, gamma3))
        from core.sl2 import random_group_element
        moved = config.transformed(random_group_element(rng, scale=0.4))
        g, canonical = canonicalize_geodesic(moved)
        np.testing.assert_allclose(canonical.points[1], (0.0, 0.0, 1.0), atol=1e-9)
        np.testing.assert_allclose(canonical.points[:, 1], 0.0, atol=1e-9)
        assert canonical.points[0, 0] > 0
        np.testing.assert_allclose(canonical.points, config.points, atol=1e-8)


class TestFixedEquilibria:
    def test_boundary_values(self):
        assert isosceles_fixed_gamma2(1.0, -1.0) == -0.5
        assert algebraic_fixed_gamma2(1.0, -1.0) == -0.5

    def test_algebraic_curve_value(self):
        assert algebraic_fixed_gamma2(1.0, -2.0) == pytest.approx(-2.0 / 3.0)

    def test_rejects_a_above_minus_one(self):
        with pytest.raises(InvalidGeometryError):
            isosceles_fixed_gamma2(1.0, -0.5)

    @pytest.mark.parametrize("a", [-1.2, -2.0, -3.5, -5.0])
    def test_velocity_vanishes(self, a):
        config = isosceles_config(1.0, isosceles_fixed_gamma2(1.0, a), a)
        report = fixed_equilibrium_report(config)
        assert report["velocity_norm"] <= 1e-10
        assert report["is_fixed"]
        # 速度为零的曲线上 ΣΓᵢΓⱼ = Γ₁²(1 + 1/a) > 0
        assert report["pair_sum"] == pytest.approx(1.0 + 1.0 / a)
        assert classify_momentum(momentum(config)).type is MomentumType.ELLIPTIC

    def test_algebraic_curve_is_not_fixed(self):
        config = isosceles_config(1.0, algebraic_fixed_gamma2(1.0, -2.0), -2.0)
        assert fixed_equilibrium_residual(config) <= 1e-10
        assert not is_fixed_equilibrium(config)

    def test_single_vortex_fixed(self):
        assert is_fixed_equilibrium(Configuration.from_xy([(0.0, 0.0)], [1.0]))

    def test_zero_momentum_curve(self):
        a = -1.7
        config = isosceles_config(1.0, zero_momentum_gamma2(1.0, a), a)
        assert classify_momentum(momentum(config)).type is MomentumType.ZERO
        assert is_relative_equilibrium(config)[0]

    def test_isosceles_geometry(self):
        config = isosceles_config(1.0, 2.0, -3.0)
        from core.hypgeo import minkowski_dot
        assert minkowski_dot(config.points[0], config.points[1]) == pytest.approx(-3.0)
        assert minkowski_dot(config.points[2], config.points[1]) == pytest.approx(-3.0)

    def test_isosceles_requires_a_below_minus_one(self):
        with pytest.raises(InvalidGeometryError):
            isosceles_config(1.0, 1.0, -1.0)

    def test_lift_apex_is_middle_vortex(self):
        config = isosceles_config(1.0, 2.0, -3.0)
        np.testing.assert_allclose(config.points[1], lift(0, 0))
