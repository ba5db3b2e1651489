#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
配置管理器测试
"""

import json
import os

import pytest

from core.config_manager import ConfigManager


ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


class TestDefaults:
    def test_sections(self):
        config = ConfigManager().get_config()
        assert set(config) == {"momentum", "integrator", "equilibria", "stability", "sweep", "output"}
        assert config["integrator"]["rel_tol"] == 1e-10
        assert config["output"]["float_format"] == "%.17g"

    def test_shipped_file_matches_defaults(self):
        manager = ConfigManager()
        assert manager.load_config_file(os.path.join(ROOT, "config", "default_settings.json"))
        assert manager.get_config() == ConfigManager().get_config()

    def test_get_config_returns_copy(self):
        manager = ConfigManager()
        manager.get_config("sweep")["resolution"] = 3
        manager.get_config()["integrator"]["rel_tol"] = 1.0
        assert manager.get_config("sweep")["resolution"] == 40
        assert manager.get_config("integrator")["rel_tol"] == 1e-10

    def test_unknown_section_is_empty(self):
        assert ConfigManager().get_config("nope") == {}


class TestMutation:
    def test_set_update_reset(self):
        manager = ConfigManager()
        manager.set_config("sweep", "resolution", 8)
        manager.update_config("integrator", {"max_step": 0.01})
        assert manager.get_config("sweep")["resolution"] == 8
        assert manager.get_config("integrator")["max_step"] == 0.01

        manager.reset_config("sweep")
        assert manager.get_config("sweep")["resolution"] == 40
        assert manager.get_config("integrator")["max_step"] == 0.01

        manager.reset_config()
        assert manager.get_config("integrator")["max_step"] == 0.05


class TestFiles:
    def test_save_and_load(self, tmp_path):
        manager = ConfigManager()
        manager.set_config("equilibria", "tol_re", 1e-6)
        path = str(tmp_path / "nested" / "settings.json")
        assert manager.save_config_file(path)

        loaded = ConfigManager(path)
        assert loaded.get_config("equilibria")["tol_re"] == 1e-6
        assert loaded.get_config_file_path() == path

    def test_partial_file_keeps_defaults(self, tmp_path):
        path = tmp_path / "partial.json"
        path.write_text(json.dumps({"sweep": {"resolution": 12}}), encoding="utf-8")
        manager = ConfigManager(str(path))
        assert manager.get_config("sweep")["resolution"] == 12
        assert manager.get_config("sweep")["a_min"] == -5.0

    def test_save_without_path(self):
        assert not ConfigManager().save_config_file()

    @pytest.mark.parametrize("content", [
        "{not json",
        json.dumps({"colors": {}}),
        json.dumps({"sweep": 3}),
        json.dumps({"integrator": {"rel_tol": -1}}),
        json.dumps([1, 2]),
    ])
    def test_rejects_invalid(self, tmp_path, content):
        path = tmp_path / "bad.json"
        path.write_text(content, encoding="utf-8")
        manager = ConfigManager()
        assert not manager.load_config_file(str(path))
        assert manager.get_config() == ConfigManager().get_config()

    def test_missing_file(self, tmp_path):
        assert not ConfigManager().load_config_file(str(tmp_path / "absent.json"))


class TestThreads:
    def test_default(self, monkeypatch):
        monkeypatch.delenv("HYPERVORTEX_THREADS", raising=False)
        assert ConfigManager().get_sweep_threads() == 0

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("HYPERVORTEX_THREADS", "3")
        assert ConfigManager().get_sweep_threads() == 3

    def test_invalid_environment(self, monkeypatch):
        monkeypatch.setenv("HYPERVORTEX_THREADS", "many")
        manager = ConfigManager()
        manager.set_config("sweep", "threads", 2)
        assert manager.get_sweep_threads() == 2
