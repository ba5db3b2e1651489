#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
报告生成器模块
负责用 Jinja2 模板生成标定报告与扫描报告（Markdown）
"""

import logging
import os
from datetime import datetime
from typing import Any, Dict, Optional

from jinja2 import Environment, StrictUndefined

logger = logging.getLogger(__name__)


CALIBRATION_TEMPLATE = """\
# 约定常数标定报告

生成时间: {{ generated_at }}
随机种子: {{ report.seed }}，探针个数: {{ report.n_probes }}

## 单参数流的生成元常数 c

d/dt g̃(exp tξ)·v = c·(ξ̌ ×_H v)

| 项目 | 值 |
|------|----|
| c | {{ "%+g"|format(report.flow_constant.constant) }} |
| 最大相对偏差 | {{ "%.3e"|format(report.flow_constant.max_deviation) }} |
| 有效探针 | {{ report.flow_constant.n_probes }} |

## 哈密顿方程的 KKS 常数 κ

Σ Γᵢ ω(Xᵢ)(Ẋᵢ, vᵢ) = κ·dH(v)

| 项目 | 值 |
|------|----|
| κ | {{ "%+g"|format(report.kks_constant.constant) }} |
| 符号 σ | {{ "%+d"|format(report.kks_constant.sign) }} |
| 大小 | {{ "%g"|format(report.kks_constant.magnitude) }} |
| 最大相对偏差 | {{ "%.3e"|format(report.kks_constant.max_deviation) }} |
| 有效探针 | {{ report.kks_constant.n_probes }} |
"""

SWEEP_TEMPLATE = """\
# 等腰测地线相对平衡稳定性扫描

生成时间: {{ generated_at }}

- Γ₁ = Γ₃ = {{ "%g"|format(gamma1) }}
- 网格: {{ n_a }} × {{ n_g }}，a ∈ [{{ "%g"|format(a_min) }}, {{ "%g"|format(a_max) }}]，Γ₂ ∈ [{{ "%g"|format(g_min) }}, {{ "%g"|format(g_max) }}]

## 判定统计

| 判定 | 单元数 |
|------|--------|
{% for name, count in verdict_counts.items() -%}
| {{ name }} | {{ count }} |
{% endfor %}
## sign(A) 与限制 Hessian 的比对

- 一致: {{ comparison.agree }}
- 不一致: {{ comparison.disagree }}
- 排除: {{ comparison.excluded }}
- 一致率: {{ "%.4f"|format(comparison.rate) }}
{% if comparison.disagreements %}
不一致单元（最多列出 {{ max_rows }} 个）:

| a | Γ₂ | A | Hessian |
|---|----|---|---------|
{% for d in comparison.disagreements[:max_rows] -%}
| {{ "%.6g"|format(d.a) }} | {{ "%.6g"|format(d.gamma2) }} | {{ "%.6g"|format(d.A_value) }} | {{ d.formal }} |
{% endfor %}
{%- endif %}

## 代数固定平衡曲线上 A 的根

- a_lo: {{ interval.a_lo if interval.a_lo is not none else "无" }}
- a_hi: {{ interval.a_hi if interval.a_hi is not none else "无" }}
- 全部根: {{ interval.roots | join(", ") }}
"""


class ReportGenerator:
    """报告生成器类

    负责生成文本报告，包括：
    - 生成元常数与 KKS 常数的标定报告
    - 稳定性扫描的统计与比对报告
    """

    def __init__(self):
        self._env = Environment(undefined=StrictUndefined, trim_blocks=False,
                                keep_trailing_newline=True)
        self._templates = {
            "calibration": self._env.from_string(CALIBRATION_TEMPLATE),
            "sweep": self._env.from_string(SWEEP_TEMPLATE),
        }

    def render(self, name: str, context: Dict[str, Any], timestamp: Optional[str] = None) -> str:
        """渲染指定模板

        Args:
            name: 模板名称（"calibration" 或 "sweep"）
            context: 模板变量
            timestamp: 生成时间，默认取当前时间

        Returns:
            str: 报告文本
        """
        if name not in self._templates:
            raise KeyError(f"未知的报告模板: {name}")
        generated_at = timestamp or datetime.now().strftime("%Y-%m-%d %H:%M:%S")
        return self._templates[name].render(generated_at=generated_at, **context)

    def calibration_report(self, report: Dict[str, Any], timestamp: Optional[str] = None) -> str:
        return self.render("calibration", {"report": report}, timestamp)

    def sweep_report(self, sweep, comparison: Dict[str, Any], interval: Dict[str, Any],
                     timestamp: Optional[str] = None, max_rows: int = 20) -> str:
        """扫描报告

        Args:
            sweep: SweepResult
            comparison: compare_a_poly_with_hessian 的结果
            interval: EquilibriumInterval.to_dict() 的结果
        """
        counts: Dict[str, int] = {}
        for cell in sweep.cells:
            name = cell.modality or "invalid"
            counts[name] = counts.get(name, 0) + 1
        context = {
            "gamma1": sweep.gamma1,
            "n_a": len(sweep.a_values),
            "n_g": len(sweep.gamma2_values),
            "a_min": float(sweep.a_values[0]),
            "a_max": float(sweep.a_values[-1]),
            "g_min": float(sweep.gamma2_values[0]),
            "g_max": float(sweep.gamma2_values[-1]),
            "verdict_counts": dict(sorted(counts.items())),
            "comparison": comparison,
            "interval": interval,
            "max_rows": max_rows,
        }
        return self.render("sweep", context, timestamp)

    def save_report(self, content: str, file_path: str) -> bool:
        """保存报告

        Args:
            content: 报告文本
            file_path: 输出路径

        Returns:
            bool: 是否保存成功
        """
        try:
            directory = os.path.dirname(file_path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(file_path, 'w', encoding='utf-8') as f:
                f.write(content)
            logger.info(f"✅ 已保存报告: {file_path}")
            return True
        except OSError as e:
            logger.error(f"❌ 保存报告失败: {e}")
            return False
