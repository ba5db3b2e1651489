#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
配置管理器模块
负责管理数值容差、积分器参数、相对平衡求解参数、稳定性扫描参数和输出格式
"""

import copy
import json
import logging
import os
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)


class ConfigManager:
    """配置管理器类

    负责管理工具的所有配置选项，包括：
    - 动量分类容差
    - 积分器配置（容差、步长、重投影）
    - 相对平衡与稳定性判定阈值
    - 扫描网格与并行度
    - 输出格式
    """

    def __init__(self, config_file: Optional[str] = None):
        self._config = self._get_default_config()
        self._config_file_path = None
        if config_file:
            self.load_config_file(config_file)

    def _get_default_config(self) -> Dict[str, Any]:
        """获取默认配置

        Returns:
            Dict[str, Any]: 默认配置字典
        """
        return {
            # 动量分类配置
            "momentum": {
                "classify_rel_tol": 1e-9
            },

            # 积分器配置
            "integrator": {
                "rel_tol": 1e-10,
                "abs_tol": 1e-12,
                "max_step": 0.05,
                "renormalize_each_step": True,
                "preserve_invariants": True,
                "collision_distance": 1e-6,
                "sample_dt": 0.1
            },

            # 相对平衡配置
            "equilibria": {
                "tol_re": 1e-8
            },

            # 稳定性配置
            "stability": {
                "tol_q_rel": 1e-9
            },

            # 扫描配置
            "sweep": {
                "gamma1": 1.0,
                "a_min": -5.0,
                "a_max": -1.05,
                "g2_min": -5.0,
                "g2_max": 5.0,
                "resolution": 40,
                "a_exclusion": 1e-6,
                "mu_zero_band": 0.05,
                "threads": 0
            },

            # 输出配置
            "output": {
                "float_format": "%.17g"
            }
        }

    def get_config(self, section: Optional[str] = None) -> Dict[str, Any]:
        """获取配置

        Args:
            section: 配置节名称，如果为None则返回全部配置

        Returns:
            Dict[str, Any]: 配置字典
        """
        if section is None:
            return copy.deepcopy(self._config)
        return dict(self._config.get(section, {}))

    def set_config(self, section: str, key: str, value: Any) -> None:
        """设置配置项

        Args:
            section: 配置节名称
            key: 配置项键名
            value: 配置项值
        """
        if section not in self._config:
            self._config[section] = {}
        self._config[section][key] = value

    def update_config(self, section: str, config_dict: Dict[str, Any]) -> None:
        """更新配置节

        Args:
            section: 配置节名称
            config_dict: 配置字典
        """
        if section not in self._config:
            self._config[section] = {}
        self._config[section].update(config_dict)

    def reset_config(self, section: Optional[str] = None) -> None:
        """重置配置

        Args:
            section: 配置节名称，如果为None则重置全部配置
        """
        if section is None:
            self._config = self._get_default_config()
        else:
            default_config = self._get_default_config()
            if section in default_config:
                self._config[section] = default_config[section]

    def load_config_file(self, file_path: str) -> bool:
        """从文件加载配置

        文件中的各节与默认配置合并，缺省的键保留默认值。

        Args:
            file_path: 配置文件路径

        Returns:
            bool: 是否加载成功
        """
        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                config_data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.error(f"❌ 加载配置文件失败: {e}")
            return False

        if not self._validate_config(config_data):
            logger.error(f"❌ 配置文件格式无效: {file_path}")
            return False

        merged = self._get_default_config()
        for section, values in config_data.items():
            merged[section].update(values)
        self._config = merged
        self._config_file_path = file_path
        logger.info(f"✅ 已加载配置文件: {file_path}")
        return True

    def save_config_file(self, file_path: Optional[str] = None) -> bool:
        """保存配置到文件

        Args:
            file_path: 配置文件路径，如果为None则使用当前路径

        Returns:
            bool: 是否保存成功
        """
        if file_path is None:
            file_path = self._config_file_path

        if file_path is None:
            return False

        try:
            directory = os.path.dirname(file_path)
            if directory:
                os.makedirs(directory, exist_ok=True)

            with open(file_path, 'w', encoding='utf-8') as f:
                json.dump(self._config, f, ensure_ascii=False, indent=2)

            self._config_file_path = file_path
            return True

        except OSError as e:
            logger.error(f"❌ 保存配置文件失败: {e}")
            return False

    def _validate_config(self, config: Dict[str, Any]) -> bool:
        """验证配置格式

        只允许默认配置中已有的节；各节必须是字典，数值容差必须为正。

        Args:
            config: 配置字典

        Returns:
            bool: 是否有效
        """
        if not isinstance(config, dict):
            return False

        defaults = self._get_default_config()
        for section, values in config.items():
            if section not in defaults or not isinstance(values, dict):
                return False

        for section, key in (("integrator", "rel_tol"), ("integrator", "abs_tol"),
                             ("integrator", "max_step"), ("equilibria", "tol_re"),
                             ("stability", "tol_q_rel")):
            value = config.get(section, {}).get(key)
            if value is not None and not (isinstance(value, (int, float)) and value > 0):
                return False

        return True

    def get_sweep_threads(self) -> int:
        """扫描线程数，环境变量 HYPERVORTEX_THREADS 优先

        Returns:
            int: 线程数，0 表示自动
        """
        env = os.environ.get("HYPERVORTEX_THREADS")
        if env:
            try:
                return max(0, int(env))
            except ValueError:
                logger.warning(f"⚠️ 忽略无效的 HYPERVORTEX_THREADS={env!r}")
        return int(self._config["sweep"].get("threads", 0))

    def get_config_file_path(self) -> Optional[str]:
        """获取当前配置文件路径

        Returns:
            Optional[str]: 配置文件路径
        """
        return self._config_file_path
