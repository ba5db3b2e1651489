#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
数据管理器模块
负责场景文件的导入、验证和转换，以及轨迹、扫描、轨道结果的 CSV 导出
"""

import json
import logging
import math
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from .dynamics import Configuration, IntegratorConfig, TrajectorySample
from .errors import CollisionError, ContractViolation, InvalidPointError, ScenarioError
from .hypgeo import lift
from .stability import SweepResult

logger = logging.getLogger(__name__)

# 17 位有效数字保证浮点数无损往返
FLOAT_FORMAT = "%.17g"

SWEEP_COLUMNS = ["a", "gamma2", "verdict_code", "A_value", "det_mu", "detQ"]
ORBIT_COLUMNS = ["t", "x", "y", "z"]


@dataclass
class Scenario:
    """场景：涡旋的平面坐标与涡量，以及积分参数

    z 坐标永远由 lift 计算，不由用户提供。
    """

    vortices: List[Dict[str, float]]
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    t_end: float = 10.0
    sample_dt: float = 0.1

    @property
    def xy(self) -> np.ndarray:
        return np.array([[v["x"], v["y"]] for v in self.vortices], dtype=float)

    @property
    def gammas(self) -> np.ndarray:
        return np.array([v["gamma"] for v in self.vortices], dtype=float)

    def to_configuration(self) -> Configuration:
        """转换为相空间构型"""
        points = np.array([lift(x, y) for x, y in self.xy])
        return Configuration(points, self.gammas)


def trajectory_columns(n: int) -> List[str]:
    """轨迹 CSV 表头: t, x1,y1,z1, …, H, mux,muy,muz, h2_residual"""
    columns = ["t"]
    for i in range(1, n + 1):
        columns += [f"x{i}", f"y{i}", f"z{i}"]
    return columns + ["H", "mux", "muy", "muz", "h2_residual"]


class DataManager:
    """数据管理器类

    负责场景与结果数据的读写，包括：
    - 场景 JSON 导入与逐字段验证
    - 轨迹 CSV 导出与首行回读
    - 稳定性扫描 CSV 导出
    - 轨道曲线 CSV 导出
    """

    def __init__(self, float_format: str = FLOAT_FORMAT,
                 integrator_defaults: Optional[Dict[str, Any]] = None):
        self.float_format = float_format
        # 场景未给出的积分参数取自配置
        self.integrator_defaults = dict(integrator_defaults or {})
        self._current_scenario = None
        self._scenario_path = None

    # ------------------------------------------------------------------
    # 场景导入
    # ------------------------------------------------------------------

    def load_scenario_file(self, file_path: str) -> Scenario:
        """加载场景文件

        Args:
            file_path: 场景 JSON 路径

        Returns:
            Scenario: 解析后的场景

        Raises:
            ScenarioError: 文件不可读、JSON 非法或字段无效
        """
        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                text = f.read()
        except OSError as e:
            raise ScenarioError(f"无法读取场景文件: {e}", field="file") from e

        scenario = self.parse_scenario_text(text)
        self._current_scenario = scenario
        self._scenario_path = file_path
        logger.info(f"✅ 已加载场景: {file_path}（{len(scenario.vortices)} 个涡旋）")
        return scenario

    def parse_scenario_text(self, text: str) -> Scenario:
        """解析场景 JSON 文本"""
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ScenarioError(f"JSON 格式错误 (行 {e.lineno}, 列 {e.colno}): {e.msg}",
                                field="json") from e
        return self.parse_scenario(data)

    def parse_scenario(self, data: Any) -> Scenario:
        """验证场景字典并构造 Scenario

        Args:
            data: json.loads 的结果

        Returns:
            Scenario: 场景

        Raises:
            ScenarioError: 出错的字段名会写进消息，例如 vortices[1].gamma
        """
        if not isinstance(data, dict):
            raise ScenarioError("场景必须是 JSON 对象", field="root")

        raw_vortices = data.get("vortices")
        if not isinstance(raw_vortices, list) or len(raw_vortices) == 0:
            raise ScenarioError("至少需要一个涡旋", field="vortices")

        vortices = []
        for i, item in enumerate(raw_vortices):
            if not isinstance(item, dict):
                raise ScenarioError("涡旋必须是对象", field=f"vortices[{i}]")
            vortex = {}
            for key in ("x", "y", "gamma"):
                vortex[key] = self._require_number(item, key, f"vortices[{i}].{key}")
            if vortex["gamma"] == 0.0:
                raise ScenarioError("涡量不能为零", field=f"vortices[{i}].gamma")
            vortices.append(vortex)

        integrator_data = data.get("integrator", {})
        if not isinstance(integrator_data, dict):
            raise ScenarioError("必须是对象", field="integrator")
        for key, value in integrator_data.items():
            if key in ("renormalize_each_step", "preserve_invariants"):
                if not isinstance(value, bool):
                    raise ScenarioError("必须是布尔值", field=f"integrator.{key}")
            elif key in ("rel_tol", "abs_tol", "max_step", "collision_distance"):
                self._require_number(integrator_data, key, f"integrator.{key}", positive=True)
            else:
                raise ScenarioError("未知的积分器参数", field=f"integrator.{key}")
        try:
            integrator = IntegratorConfig.from_dict({**self.integrator_defaults, **integrator_data})
        except ContractViolation as e:
            raise ScenarioError(str(e), field="integrator") from e

        t_end = self._require_number(data, "t_end", "t_end", positive=True, default=10.0)
        sample_dt = self._require_number(data, "sample_dt", "sample_dt", positive=True,
                                         default=float(self.integrator_defaults.get("sample_dt", 0.1)))

        scenario = Scenario(vortices=vortices, integrator=integrator, t_end=t_end, sample_dt=sample_dt)
        try:
            scenario.to_configuration()
        except (CollisionError, InvalidPointError, ContractViolation) as e:
            raise ScenarioError(str(e), field="vortices") from e
        return scenario

    @staticmethod
    def _require_number(data: Dict, key: str, field_name: str, positive: bool = False,
                        default: Optional[float] = None) -> float:
        if key not in data:
            if default is not None:
                return default
            raise ScenarioError("缺少字段", field=field_name)
        value = data[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ScenarioError(f"必须是数值，得到 {value!r}", field=field_name)
        value = float(value)
        if not math.isfinite(value):
            raise ScenarioError("必须是有限数值", field=field_name)
        if positive and value <= 0:
            raise ScenarioError(f"必须为正，得到 {value!r}", field=field_name)
        return value

    def get_current_scenario(self) -> Optional[Scenario]:
        """获取当前场景

        Returns:
            Optional[Scenario]: 当前场景
        """
        return self._current_scenario

    # ------------------------------------------------------------------
    # 结果导出
    # ------------------------------------------------------------------

    def trajectory_frame(self, samples: List[TrajectorySample]) -> pd.DataFrame:
        """把轨迹采样转换为 DataFrame"""
        n = samples[0].config.n if samples else 0
        rows = []
        for s in samples:
            row = [s.t]
            row.extend(s.config.points.ravel().tolist())
            row.append(s.H)
            row.extend(np.asarray(s.mu, dtype=float).tolist())
            row.append(s.h2_residual)
            rows.append(row)
        return pd.DataFrame(rows, columns=trajectory_columns(n))

    def sweep_frame(self, sweep: SweepResult) -> pd.DataFrame:
        """把扫描结果转换为 DataFrame，列顺序固定"""
        frame = pd.DataFrame([cell._asdict() for cell in sweep.cells])
        if frame.empty:
            return pd.DataFrame(columns=SWEEP_COLUMNS)
        frame["verdict_code"] = frame["verdict_code"].astype(int)
        return frame[SWEEP_COLUMNS]

    def orbit_frame(self, times, points) -> pd.DataFrame:
        """轨道曲线采样 (t, x, y, z)"""
        points = np.asarray(points, dtype=float).reshape(-1, 3)
        frame = pd.DataFrame(points, columns=ORBIT_COLUMNS[1:])
        frame.insert(0, "t", np.asarray(times, dtype=float))
        return frame

    def write_csv(self, frame: pd.DataFrame, file_path: str) -> bool:
        """写 CSV：逗号分隔、LF 换行、17 位有效数字

        Args:
            frame: 数据表
            file_path: 输出路径

        Returns:
            bool: 是否写入成功
        """
        try:
            directory = os.path.dirname(file_path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            frame.to_csv(file_path, index=False, float_format=self.float_format,
                         lineterminator='\n', encoding='utf-8')
            logger.info(f"✅ 已写入 {file_path}（{len(frame)} 行）")
            return True
        except OSError as e:
            logger.error(f"❌ 写入CSV文件失败: {e}")
            return False

    def export_trajectory(self, samples: List[TrajectorySample], file_path: str) -> bool:
        return self.write_csv(self.trajectory_frame(samples), file_path)

    def export_sweep(self, sweep: SweepResult, file_path: str) -> bool:
        return self.write_csv(self.sweep_frame(sweep), file_path)

    def export_orbit(self, times, points, file_path: str) -> bool:
        return self.write_csv(self.orbit_frame(times, points), file_path)

    # ------------------------------------------------------------------
    # 回读
    # ------------------------------------------------------------------

    def load_trajectory_csv(self, file_path: str) -> pd.DataFrame:
        """读回轨迹 CSV（round_trip 使用 float_precision 保证无损）"""
        return pd.read_csv(file_path, float_precision="round_trip")

    def first_configuration(self, file_path: str, gammas) -> Configuration:
        """由轨迹 CSV 的首行重建初始构型

        Args:
            file_path: 轨迹 CSV 路径
            gammas: 涡量（CSV 中不保存）

        Returns:
            Configuration: 首行的构型
        """
        frame = self.load_trajectory_csv(file_path)
        gammas = np.asarray(gammas, dtype=float)
        columns = [c for i in range(1, len(gammas) + 1) for c in (f"x{i}", f"y{i}", f"z{i}")]
        points = frame.loc[0, columns].to_numpy(dtype=float).reshape(-1, 3)
        return Configuration(points, gammas)
