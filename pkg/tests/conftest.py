#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
测试公共设置：把 src 加入路径，提供固定种子的随机数生成器
"""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'src'))

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="运行全尺寸的慢速测试")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 全尺寸验收测试，默认跳过")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow") or "slow" in (config.getoption("markexpr") or ""):
        return
    skip_slow = pytest.mark.skip(reason="需要 --runslow 或 -m slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def write_scenario(tmp_path):
    """把场景字典写成 JSON 文件并返回路径"""
    import json

    def _write(data, name="scenario.json"):
        path = tmp_path / name
        if isinstance(data, str):
            path.write_text(data, encoding="utf-8")
        else:
            path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)

    return _write
