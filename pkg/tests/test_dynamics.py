#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
涡旋动力学测试：速度场、哈密顿量、动量映射、积分器与 KKS 标定
"""

import numpy as np
import pytest

from core.dynamics import (Configuration, IntegratorConfig, calibrate_kks_constant, drift_summary,
                           evolve_by_flow, hamiltonian, integrate, kks_form, min_pair_distance,
                           momentum, project_invariants, random_configuration, sample_times,
                           tangent_projection, velocity)
from core.equilibria import (isosceles_config, isosceles_fixed_gamma2, make_equilateral,
                             re_multipliers)
from core.errors import CollisionError, ContractViolation, IntegrationFailure, InvalidPointError
from core.hypgeo import hcross, hdistance, lift, minkowski_dot
from core.sl2 import coadjoint, mobius_lift, random_group_element


def dipole(x=1.0):
    return Configuration(np.array([lift(x, 0.0), lift(-x, 0.0)]), (1.0, -1.0))


def same_sign_configuration(rng, n=3):
    config = random_configuration(rng, n=n)
    return Configuration(config.points, np.abs(config.gammas))


class TestConfiguration:
    def test_rejects_coincident_points(self):
        with pytest.raises(CollisionError):
            Configuration(np.array([lift(0.2, 0.1), lift(0.2, 0.1)]), (1.0, 1.0))

    def test_rejects_nearly_coincident_points(self):
        with pytest.raises(CollisionError):
            Configuration(np.array([lift(0.2, 0.1), lift(0.2 + 1e-10, 0.1)]), (1.0, -1.0))

    def test_min_pair_distance(self):
        p = lift(0.2, 0.1)
        assert min_pair_distance(np.array([p, p])) == 0.0
        close = np.array([lift(0.0, 0.0), lift(np.sinh(1e-7), 0.0)])
        assert min_pair_distance(close) == pytest.approx(1e-7, rel=1e-6)
        far = np.array([lift(0.0, 0.0), lift(0.75, 0.0), lift(-3.0, 0.0)])
        assert min_pair_distance(far) == pytest.approx(hdistance(far[0], far[1]), rel=1e-12)
        assert min_pair_distance(far[:1]) == np.inf

    def test_rejects_zero_gamma(self):
        with pytest.raises(ContractViolation):
            Configuration(np.array([lift(0, 0)]), (0.0,))

    def test_rejects_off_sheet(self):
        with pytest.raises(InvalidPointError):
            Configuration(np.array([[0.0, 0.0, 2.0]]), (1.0,))

    def test_from_xy(self):
        config = Configuration.from_xy([(0.75, 0.0)], [2.0])
        np.testing.assert_allclose(config.points[0], (0.75, 0.0, 1.25))
        assert config.n == 1


class TestVelocity:
    def test_single_vortex(self):
        np.testing.assert_array_equal(velocity(Configuration.from_xy([(0.3, 0.4)], [1.0])), np.zeros((1, 3)))

    def test_dipole_hand_value(self):
        expected = np.array([0.0, -1.0 / (2.0 * np.sqrt(2.0) * np.pi), 0.0])
        v = velocity(dipole())
        np.testing.assert_allclose(v[0], expected, atol=1e-12)
        np.testing.assert_allclose(v[1], expected, atol=1e-12)

    def test_tangent(self, rng):
        config = random_configuration(rng, n=4)
        v = velocity(config)
        for p, w in zip(config.points, v):
            assert abs(minkowski_dot(p, w)) <= 1e-10 * max(1.0, np.linalg.norm(w) * np.linalg.norm(p))

    def test_equivariance(self, rng):
        for _ in range(20):
            config = random_configuration(rng)
            g = random_group_element(rng, scale=0.5)
            moved = config.transformed(g)
            expected = velocity(config) @ mobius_lift(g).T
            np.testing.assert_allclose(velocity(moved), expected,
                                       atol=1e-9 * max(1.0, np.max(np.abs(expected))))


class TestHamiltonianAndMomentum:
    def test_single_vortex(self):
        assert hamiltonian(Configuration.from_xy([(0.0, 0.0)], [1.0])) == 0.0

    def test_dipole_at_ln2(self):
        config = Configuration(np.array([lift(0.0, 0.0), lift(0.75, 0.0)]), (1.0, -1.0))
        assert hamiltonian(config) == pytest.approx(np.log(1.0 / 9.0) / (2.0 * np.pi), abs=1e-12)
        assert hamiltonian(config) == pytest.approx(-0.3496991, abs=1e-7)

    def test_single_vortex_momentum(self):
        mu = momentum(Configuration.from_xy([(0.0, 0.0)], [1.0]))
        np.testing.assert_array_equal(mu, (0.0, 0.0, 1.0))

    def test_dipole_momentum(self):
        np.testing.assert_allclose(momentum(dipole(0.5)), (1.0, 0.0, 0.0), atol=1e-15)

    def test_equivariance_suite(self, rng):
        worst = 0.0
        for _ in range(200):
            config = random_configuration(rng)
            g = random_group_element(rng, scale=0.5)
            moved = config.transformed(g)
            mu_expected = coadjoint(g, momentum(config))
            worst = max(worst,
                        np.max(np.abs(momentum(moved) - mu_expected)) / max(1.0, np.max(np.abs(mu_expected))),
                        abs(hamiltonian(moved) - hamiltonian(config)))
        assert worst <= 1e-9

    @pytest.mark.slow
    def test_equivariance_full(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            config = random_configuration(rng)
            g = random_group_element(rng, scale=0.5)
            moved = config.transformed(g)
            assert hamiltonian(moved) == pytest.approx(hamiltonian(config), abs=1e-9)
            mu_expected = coadjoint(g, momentum(config))
            np.testing.assert_allclose(momentum(moved), mu_expected,
                                       atol=1e-9 * max(1.0, np.max(np.abs(mu_expected))))


class TestIntegrator:
    def test_sample_times(self):
        np.testing.assert_allclose(sample_times(1.0, 0.25), [0, 0.25, 0.5, 0.75, 1.0])
        np.testing.assert_allclose(sample_times(0.3, 0.25), [0, 0.25, 0.3])

    def test_config_validation(self):
        with pytest.raises(ContractViolation):
            IntegratorConfig(rel_tol=0.0)
        with pytest.raises(ContractViolation):
            integrate(dipole(), -1.0)

    def test_single_vortex_constant(self):
        config = Configuration.from_xy([(0.3, -0.2)], [1.5])
        samples = integrate(config, 1.0, sample_dt=0.25)
        assert len(samples) == 5
        for s in samples:
            np.testing.assert_allclose(s.config.points, config.points, atol=1e-15)

    def test_fixed_equilibrium_stays(self):
        config = isosceles_config(1.0, isosceles_fixed_gamma2(1.0, -2.0), -2.0)
        samples = integrate(config, 2.0, sample_dt=0.5)
        for s in samples:
            np.testing.assert_allclose(s.config.points, config.points, atol=1e-9)

    def test_dipole_conservation(self):
        config = dipole()
        samples = integrate(config, 5.0, IntegratorConfig(rel_tol=1e-10))
        summary = drift_summary(samples)
        assert summary["max_delta_H"] <= 1e-8
        assert summary["max_delta_mu"] <= 1e-8
        assert summary["max_h2_residual"] <= 1e-12 * max(s.config.points[:, 2].max() ** 2 for s in samples)
        assert samples[-1].t == pytest.approx(5.0)

    def test_random_three_vortex_conservation(self, rng):
        for _ in range(3):
            config = same_sign_configuration(rng)
            samples = integrate(config, 10.0)
            summary = drift_summary(samples)
            assert summary["max_delta_H"] <= 1e-8
            assert summary["max_delta_mu"] <= 1e-8
            assert summary["max_h2_residual"] <= 1e-12 * max(s.config.points[:, 2].max() ** 2 for s in samples)
            assert summary["accepted_steps"] >= 200

    def test_two_vortex_conic_invariant(self, rng):
        for _ in range(5):
            config = random_configuration(rng, n=2)
            mu = momentum(config)
            samples = integrate(config, 5.0, sample_dt=0.5)
            levels = np.array([[minkowski_dot(p, mu) for p in s.config.points] for s in samples])
            np.testing.assert_allclose(levels, levels[0][None, :].repeat(len(levels), axis=0),
                                       atol=1e-7 * max(1.0, np.max(np.abs(levels))))

    def test_equilateral_keeps_shape(self):
        config = make_equilateral(2.0, (1.0, 1.0, 1.0))
        d0 = hdistance(config.points[0], config.points[1])
        for s in integrate(config, 10.0, sample_dt=1.0):
            p = s.config.points
            for i, j in ((0, 1), (1, 2), (0, 2)):
                assert hdistance(p[i], p[j]) == pytest.approx(d0, abs=1e-7)

    def test_equilateral_flow_matches_integration(self):
        config = make_equilateral(2.0, (1.0, 0.7, 1.3))
        report = re_multipliers(config)
        np.testing.assert_allclose(velocity(config), hcross(report.flow_generator, config.points),
                                   atol=1e-9)
        for s in integrate(config, 1.0, sample_dt=0.25):
            np.testing.assert_allclose(s.config.points,
                                       evolve_by_flow(config, report.flow_generator, s.t).points,
                                       atol=1e-6)

    def test_collision_guard(self):
        with pytest.raises(IntegrationFailure) as info:
            integrate(dipole(), 1.0, IntegratorConfig(collision_distance=10.0))
        assert info.value.samples
        assert info.value.last_sample.t == 0.0
        assert info.value.diagnostic["reason"] == "near_collision"

    def test_relative_equilibrium_stays_on_orbit(self):
        config = make_equilateral(2.0, (1.0, 0.7, 1.3))
        mu = momentum(config)
        samples = integrate(config, 5.0, sample_dt=0.5)
        levels = np.array([[minkowski_dot(p, mu) for p in s.config.points] for s in samples])
        np.testing.assert_allclose(levels, levels[0][None, :].repeat(len(levels), axis=0),
                                   atol=1e-8 * max(1.0, np.max(np.abs(levels))))

    def test_plain_renormalization_stays_on_sheet(self, rng):
        config = same_sign_configuration(rng)
        samples = integrate(config, 2.0, IntegratorConfig(preserve_invariants=False), sample_dt=0.5)
        summary = drift_summary(samples)
        assert summary["max_h2_residual"] <= 1e-12 * max(s.config.points[:, 2].max() ** 2 for s in samples)
        assert summary["max_delta_H"] <= 1e-6


class TestProjection:
    def config(self):
        return Configuration.from_xy([(0.0, 0.0), (0.8, 0.1), (-0.3, 0.6)], [1.0, 0.5, -0.7])

    def test_restores_invariants(self, rng):
        config = self.config()
        mu0, h0 = momentum(config), hamiltonian(config)
        noisy = config.points + 1e-8 * rng.normal(size=config.points.shape)
        projected = project_invariants(noisy, config.gammas, mu0, h0)
        moved = Configuration(projected, config.gammas)
        np.testing.assert_allclose(momentum(moved), mu0, atol=1e-12)
        assert hamiltonian(moved) == pytest.approx(h0, abs=1e-12)
        np.testing.assert_allclose(minkowski_dot(projected, projected), -1.0, atol=1e-14)
        assert np.max(np.abs(projected - config.points)) <= 1e-6

    def test_fixed_point_of_projection(self):
        config = self.config()
        projected = project_invariants(config.points, config.gammas, momentum(config), hamiltonian(config))
        np.testing.assert_allclose(projected, config.points, atol=1e-15)

    def test_single_vortex_only_renormalizes(self):
        projected = project_invariants([[0.3, 0.4, 2.0]], [1.0], (0.0, 0.0, 0.0), 0.0)
        np.testing.assert_allclose(projected, [[0.3, 0.4, np.sqrt(1.25)]])

    def test_two_vortex_keeps_momentum(self, rng):
        config = random_configuration(rng, n=2)
        mu0 = momentum(config)
        noisy = config.points + 1e-9 * rng.normal(size=config.points.shape)
        projected = project_invariants(noisy, config.gammas, mu0, hamiltonian(config))
        np.testing.assert_allclose(config.gammas @ projected, mu0, atol=1e-12)
        assert hamiltonian(Configuration(projected, config.gammas)) == pytest.approx(hamiltonian(config),
                                                                                      abs=1e-10)


class TestFlow:
    def test_zero_time(self, rng):
        config = random_configuration(rng)
        np.testing.assert_allclose(evolve_by_flow(config, rng.normal(size=3), 0.0).points, config.points)

    def test_rotation(self):
        config = Configuration.from_xy([(1.0, 0.0)], [1.0])
        moved = evolve_by_flow(config, (0.0, 0.0, 2.0), 0.3)
        np.testing.assert_allclose(moved.points[0], (np.cos(0.6), np.sin(0.6), np.sqrt(2.0)), atol=1e-14)


class TestKKS:
    def test_antisymmetry(self, rng):
        x = lift(*rng.normal(size=2))
        u = tangent_projection(x, rng.normal(size=3))
        v = tangent_projection(x, rng.normal(size=3))
        assert kks_form(x, u, u) == pytest.approx(0.0, abs=1e-14)
        assert kks_form(x, u, v) == pytest.approx(-kks_form(x, v, u), abs=1e-14)

    def test_rejects_non_tangent(self):
        with pytest.raises(ContractViolation):
            kks_form(lift(0, 0), (0.0, 0.0, 1.0), (1.0, 0.0, 0.0))

    def test_calibration(self):
        result = calibrate_kks_constant(n_probes=100, rng=np.random.default_rng(3))
        assert result["constant"] == -0.5
        assert result["sign"] == -1
        assert result["magnitude"] == 0.5
