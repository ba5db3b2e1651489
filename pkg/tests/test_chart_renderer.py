#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
图表渲染器测试：庞加莱圆盘坐标、HTML 输出与 PyEcharts 缺失时的降级
"""

import numpy as np
import pytest

from core import chart_renderer
from core.chart_renderer import ChartRenderer, poincare_disk
from core.dynamics import Configuration, integrate
from core.hypgeo import lift
from core.sl2 import orbit_curve
from core.stability import sweep_isosceles


@pytest.fixture
def samples():
    config = Configuration(np.array([lift(1.0, 0.0), lift(-1.0, 0.0)]), (1.0, -1.0))
    return integrate(config, 0.5, sample_dt=0.25)


@pytest.fixture
def orbit():
    times = np.linspace(0.0, np.pi, 5)
    points = np.array([orbit_curve((0.0, 0.0, 1.0), lift(1.0, 0.0), t) for t in times])
    return times, points


def test_poincare_disk():
    np.testing.assert_allclose(poincare_disk(lift(0.0, 0.0)), (0.0, 0.0))
    r = 1.3
    np.testing.assert_allclose(poincare_disk(lift(np.sinh(r), 0.0)), (np.tanh(r / 2.0), 0.0), atol=1e-15)
    disk = poincare_disk(np.array([lift(5.0, -2.0), lift(-0.3, 0.1)]))
    assert disk.shape == (2, 2)
    assert np.all(np.linalg.norm(disk, axis=1) < 1.0)


class TestWithoutPyecharts:
    @pytest.fixture(autouse=True)
    def unavailable(self, monkeypatch):
        monkeypatch.setattr(chart_renderer, "PYECHARTS_AVAILABLE", False)

    def test_available_flag(self):
        assert not ChartRenderer().available

    def test_sweep_is_skipped(self, tmp_path):
        out = tmp_path / "sweep.html"
        assert not ChartRenderer().render_sweep(sweep_isosceles(resolution=2, threads=1), str(out))
        assert not out.exists()

    def test_trajectory_and_orbit_are_skipped(self, tmp_path, samples, orbit):
        renderer = ChartRenderer()
        assert not renderer.render_trajectory(samples, str(tmp_path / "traj.html"))
        assert not renderer.render_orbit(*orbit, str(tmp_path / "orbit.html"))
        assert list(tmp_path.iterdir()) == []


class TestWithPyecharts:
    @pytest.fixture(autouse=True)
    def require_pyecharts(self):
        pytest.importorskip("pyecharts")

    def test_render_sweep(self, tmp_path):
        out = tmp_path / "charts" / "sweep.html"
        sweep = sweep_isosceles(resolution=(3, 3), threads=1)
        assert ChartRenderer().render_sweep(sweep, str(out))
        html = out.read_text(encoding="utf-8")
        assert "<!DOCTYPE html>" in html
        assert "echarts" in html
        assert "GmuStable" in html

    def test_render_trajectory(self, tmp_path, samples):
        out = tmp_path / "traj.html"
        assert ChartRenderer(theme="dark").render_trajectory(samples, str(out))
        html = out.read_text(encoding="utf-8")
        assert "u1" in html and "v2" in html

    def test_render_orbit(self, tmp_path, orbit):
        out = tmp_path / "orbit.html"
        assert ChartRenderer().render_orbit(*orbit, str(out), mu=(0.0, 0.0, 1.0))
        assert "echarts" in out.read_text(encoding="utf-8")

    def test_unwritable_path(self, tmp_path):
        assert not ChartRenderer().render_sweep(sweep_isosceles(resolution=2, threads=1), str(tmp_path))
