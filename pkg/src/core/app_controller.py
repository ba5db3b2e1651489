#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
应用控制器模块
负责协调各个核心模块的交互，每个命令行子命令对应一个 cmd_* 方法

退出码：0 成功，2 输入错误，3 积分失败，4 前置条件不满足。
标准输出只打印一行 JSON 结果，日志写到标准错误。
"""

import json
import logging
import math
import sys
from typing import Any, Callable, Dict, Optional, Sequence, TextIO

import numpy as np

from .chart_renderer import ChartRenderer
from .config_manager import ConfigManager
from .data_manager import DataManager
from .dynamics import build_calibration_report, drift_summary, integrate, momentum
from .equilibria import is_relative_equilibrium, re_shape
from .errors import (CalibrationError, CollisionError, ContractViolation, DegenerateBasisError,
                     DegenerateMomentumError, DegenerateTriangleError, HypervortexError,
                     IndeterminateError, IntegrationFailure, InvalidDirectionsError,
                     InvalidGeometryError, InvalidPointError, ScenarioError)
from .hypgeo import lift
from .report_generator import ReportGenerator
from .sl2 import ISOTROPY_DESCRIPTIONS, classify_momentum, orbit_curve
from .stability import (classify_stability, compare_a_poly_with_hessian, equilibrium_interval,
                        sweep_isosceles)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INTEGRATION = 3
EXIT_PRECONDITION = 4

# 异常到退出码的默认映射，按顺序匹配
EXIT_CODES = (
    (IntegrationFailure, EXIT_INTEGRATION),
    (ScenarioError, EXIT_INPUT),
    (InvalidPointError, EXIT_INPUT),
    (InvalidGeometryError, EXIT_INPUT),
    (DegenerateTriangleError, EXIT_INPUT),
    (CollisionError, EXIT_INPUT),
    (ContractViolation, EXIT_PRECONDITION),
    (DegenerateMomentumError, EXIT_PRECONDITION),
    (IndeterminateError, EXIT_PRECONDITION),
    (InvalidDirectionsError, EXIT_PRECONDITION),
    (DegenerateBasisError, EXIT_PRECONDITION),
    (CalibrationError, EXIT_PRECONDITION),
    (HypervortexError, EXIT_PRECONDITION),
    (ValueError, EXIT_INPUT),
)


def to_jsonable(value: Any) -> Any:
    """numpy 类型转为 JSON 可序列化对象，非有限浮点数转为 None"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return value


class AppController:
    """应用控制器类

    负责协调各个核心模块的交互，包括：
    - 按配置构造数据管理器、图表渲染器与报告生成器
    - 执行各子命令并输出单行 JSON
    - 把异常统一转换为退出码
    """

    def __init__(self, config_manager: Optional[ConfigManager] = None,
                 stdout: Optional[TextIO] = None):
        self.config_manager = config_manager or ConfigManager()
        output = self.config_manager.get_config("output")
        self.data_manager = DataManager(float_format=output.get("float_format", "%.17g"),
                                        integrator_defaults=self.config_manager.get_config("integrator"))
        self.chart_renderer = ChartRenderer()
        self.report_generator = ReportGenerator()
        self._stdout = stdout

    # ------------------------------------------------------------------
    # 公共工具
    # ------------------------------------------------------------------

    def emit(self, payload: Dict[str, Any]) -> None:
        """向标准输出写一行 JSON"""
        stream = self._stdout or sys.stdout
        stream.write(json.dumps(to_jsonable(payload), ensure_ascii=False, allow_nan=False) + "\n")
        stream.flush()

    def _run(self, name: str, body: Callable[[], int],
             overrides: Sequence = ()) -> int:
        """执行命令体并把异常映射为退出码

        Args:
            name: 命令名，用于日志
            body: 命令体，返回退出码
            overrides: 优先匹配的 (异常类型, 退出码) 列表
        """
        try:
            return body()
        except Exception as e:
            for exc_type, code in tuple(overrides) + EXIT_CODES:
                if isinstance(e, exc_type):
                    logger.error(f"❌ {name} 失败: {str(e)}")
                    self.emit({"error": type(e).__name__, "message": str(e), "exit_code": code})
                    return code
            raise

    def _tol_re(self, tol: Optional[float]) -> float:
        if tol is not None:
            if not tol > 0:
                raise ValueError(f"--tol 必须为正，得到 {tol}")
            return float(tol)
        return float(self.config_manager.get_config("equilibria")["tol_re"])

    def _tol_q_rel(self) -> float:
        return float(self.config_manager.get_config("stability")["tol_q_rel"])

    # ------------------------------------------------------------------
    # 子命令
    # ------------------------------------------------------------------

    def cmd_simulate(self, scenario_path: str, out_csv: str, html: Optional[str] = None) -> int:
        """积分场景并写轨迹 CSV，输出守恒量漂移"""
        def body() -> int:
            scenario = self.data_manager.load_scenario_file(scenario_path)
            config = scenario.to_configuration()
            logger.info(f"🔄 开始积分: N = {config.n}, t_end = {scenario.t_end:g}")
            try:
                samples = integrate(config, scenario.t_end, scenario.integrator, scenario.sample_dt)
            except IntegrationFailure as e:
                if e.samples:
                    self.data_manager.export_trajectory(e.samples, out_csv)
                    logger.warning(f"⚠️ 已保留部分轨迹 ({len(e.samples)} 个采样): {out_csv}")
                self.emit({"error": "IntegrationFailure", "message": str(e),
                           "diagnostic": e.diagnostic, "exit_code": EXIT_INTEGRATION,
                           "partial_samples": len(e.samples)})
                logger.error(f"❌ simulate 失败: {str(e)}")
                return EXIT_INTEGRATION

            if not self.data_manager.export_trajectory(samples, out_csv):
                raise ValueError(f"无法写入输出文件: {out_csv}")
            if html:
                self.chart_renderer.render_trajectory(samples, html)
            summary = drift_summary(samples)
            logger.info(f"✅ 积分完成: |ΔH| = {summary['delta_H']:.3e}, ‖Δμ̌‖ = {summary['delta_mu']:.3e}")
            self.emit(summary)
            return EXIT_OK

        return self._run("simulate", body)

    def cmd_classify(self, scenario_path: str) -> int:
        """输出动量 μ̌、det μ、类型与迷向子群描述"""
        def body() -> int:
            config = self.data_manager.load_scenario_file(scenario_path).to_configuration()
            mu = momentum(config)
            tol = self.config_manager.get_config("momentum")["classify_rel_tol"]
            norm = float(np.linalg.norm(mu))
            result = classify_momentum(mu, tol=tol * max(1.0, norm * norm))
            self.emit({
                "mu": mu,
                "det_mu": result.det_mu,
                "type": result.type.value,
                "isotropy_description": ISOTROPY_DESCRIPTIONS[result.type],
            })
            return EXIT_OK

        return self._run("classify", body)

    def cmd_re(self, scenario_path: str, tol: Optional[float] = None) -> int:
        """求解 ξ 与乘子并判断是否为相对平衡"""
        def body() -> int:
            config = self.data_manager.load_scenario_file(scenario_path).to_configuration()
            is_re, report = is_relative_equilibrium(config, self._tol_re(tol))
            payload = report.to_dict()
            payload["is_re"] = is_re
            if config.n == 3:
                payload["shape"] = re_shape(config) if is_re else "neither"
            self.emit(payload)
            return EXIT_OK

        return self._run("re", body)

    def cmd_stability(self, scenario_path: str, tol: Optional[float] = None) -> int:
        """对相对平衡给出稳定性判定"""
        def body() -> int:
            config = self.data_manager.load_scenario_file(scenario_path).to_configuration()
            verdict = classify_stability(config, tol_re=self._tol_re(tol),
                                         tol_q_rel=self._tol_q_rel())
            self.emit(verdict.to_dict())
            return EXIT_OK

        return self._run("stability", body)

    def cmd_sweep(self, out_csv: str, gamma1: Optional[float] = None, a_min: Optional[float] = None,
                  a_max: Optional[float] = None, g2_min: Optional[float] = None,
                  g2_max: Optional[float] = None, resolution: Optional[int] = None,
                  html: Optional[str] = None, report: Optional[str] = None) -> int:
        """等腰测地线族稳定性扫描，输出 A 在代数固定平衡曲线上的根"""
        def body() -> int:
            cfg = self.config_manager.get_config("sweep")
            g1 = cfg["gamma1"] if gamma1 is None else gamma1
            a_range = (cfg["a_min"] if a_min is None else a_min, cfg["a_max"] if a_max is None else a_max)
            g_range = (cfg["g2_min"] if g2_min is None else g2_min, cfg["g2_max"] if g2_max is None else g2_max)
            res = cfg["resolution"] if resolution is None else resolution
            if g1 == 0:
                raise ValueError("--gamma1 不能为零")

            sweep = sweep_isosceles(g1, a_range, g_range, res,
                                    threads=self.config_manager.get_sweep_threads(),
                                    mu_zero_band=cfg["mu_zero_band"], tol_q_rel=self._tol_q_rel())
            if not self.data_manager.export_sweep(sweep, out_csv):
                raise ValueError(f"无法写入输出文件: {out_csv}")
            comparison = compare_a_poly_with_hessian(sweep, cfg["a_exclusion"])
            interval = equilibrium_interval(g1).to_dict()
            if html:
                self.chart_renderer.render_sweep(sweep, html)
            if report and not self.report_generator.save_report(
                    self.report_generator.sweep_report(sweep, comparison, interval), report):
                raise ValueError(f"无法写入报告文件: {report}")
            self.emit({
                "gamma1": g1,
                "interval": [interval["a_lo"], interval["a_hi"]],
                "roots": interval["roots"],
                "negative_intervals": interval["negative_intervals"],
                "cells": len(sweep.cells),
                "a_poly_agreement": {k: comparison[k] for k in ("agree", "disagree", "excluded", "rate")},
            })
            return EXIT_OK

        return self._run("sweep", body)

    def cmd_orbit(self, mu: Sequence[float], nu: Sequence[float], t_max: float, samples: int,
                  out_csv: str, html: Optional[str] = None) -> int:
        """沿 μ 的迷向子群采样轨道曲线"""
        def body() -> int:
            if len(mu) != 3 or len(nu) != 2:
                raise ValueError("--mu 需要 3 个分量，--nu 需要 2 个分量")
            if samples < 2:
                raise ValueError("--samples 至少为 2")
            mu_vec = np.asarray(mu, dtype=float)
            start = lift(*nu)
            times = np.linspace(0.0, float(t_max), int(samples))
            points = np.array([orbit_curve(mu_vec, start, t) for t in times])
            if not self.data_manager.export_orbit(times, points, out_csv):
                raise ValueError(f"无法写入输出文件: {out_csv}")
            if html:
                self.chart_renderer.render_orbit(times, points, html, mu=mu_vec)
            kind = classify_momentum(mu_vec)
            self.emit({
                "type": kind.type.value,
                "samples": int(samples),
                "first": points[0],
                "last": points[-1],
                "closure_gap": float(np.linalg.norm(points[-1] - points[0])),
            })
            return EXIT_OK

        return self._run("orbit", body, overrides=((DegenerateMomentumError, EXIT_INPUT),))

    def cmd_calibrate(self, n_probes: int = 100, seed: int = 0, report: Optional[str] = None) -> int:
        """标定生成元常数 c 与 KKS 常数 κ"""
        def body() -> int:
            result = build_calibration_report(n_probes=n_probes, seed=seed)
            if report and not self.report_generator.save_report(
                    self.report_generator.calibration_report(result), report):
                raise ValueError(f"无法写入报告文件: {report}")
            self.emit(result)
            return EXIT_OK

        return self._run("calibrate", body)

    def get_app_status(self) -> Dict[str, Any]:
        """获取应用状态"""
        return {
            "config_file": self.config_manager.get_config_file_path(),
            "html_available": self.chart_renderer.available,
            "current_scenario": self.data_manager.get_current_scenario() is not None,
        }
