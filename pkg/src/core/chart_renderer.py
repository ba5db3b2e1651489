#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
图表渲染器模块
负责使用PyEcharts把扫描图谱、轨迹和轨道曲线渲染为独立的HTML文件

CSV/JSON 才是结果的正式格式，HTML 只用于快速查看。
"""

import logging
import os
from typing import Any, Dict, List

import numpy as np

from .dynamics import TrajectorySample
from .stability import INVALID_CODE, VERDICT_CODES, SweepResult

logger = logging.getLogger(__name__)

try:
    from pyecharts import options as opts
    from pyecharts.charts import HeatMap, Line
    from pyecharts.globals import ThemeType
    PYECHARTS_AVAILABLE = True
except ImportError as e:
    logger.warning(f"⚠️ PyEcharts导入失败: {e}，HTML输出不可用")
    PYECHARTS_AVAILABLE = False

    class ThemeType:
        WHITE = "white"
        DARK = "dark"
    HeatMap = None
    Line = None
    opts = None


# 判定代码的配色，与扫描 CSV 的 verdict_code 一一对应
VERDICT_COLORS = {
    0: "#1a9850",
    1: "#91cf60",
    2: "#fee08b",
    3: "#d73027",
    4: "#4575b4",
    5: "#bdbdbd",
    INVALID_CODE: "#000000",
}

HTML_TEMPLATE = """
<!DOCTYPE html>
<html>
<head>
    <meta charset="UTF-8">
    <title>{title}</title>
    <style>
        body {{
            margin: 0;
            padding: 0;
            font-family: 'Microsoft YaHei', sans-serif;
            background-color: #f5f5f5;
        }}
        .chart-wrapper {{
            width: 95%;
            margin: 20px auto;
            background-color: white;
            border-radius: 8px;
            box-shadow: 0 2px 10px rgba(0,0,0,0.1);
            padding: 20px;
            box-sizing: border-box;
        }}
    </style>
</head>
<body>
    <div class="chart-wrapper">
        {chart_html}
    </div>
</body>
</html>
"""


def poincare_disk(points) -> np.ndarray:
    """双曲面点到庞加莱圆盘：(x, y, z) ↦ (x, y)/(1 + z)"""
    points = np.asarray(points, dtype=float)
    return points[..., :2] / (1.0 + points[..., 2:3])


class ChartRenderer:
    """图表渲染器类

    负责生成结果的HTML图表，包括：
    - 稳定性扫描图谱（热力图，按判定代码着色）
    - 轨迹的庞加莱圆盘坐标随时间变化
    - 轨道曲线坐标随参数变化
    - 图表主题管理
    """

    def __init__(self, theme: str = "white", width: str = "1000px", height: str = "700px"):
        self._chart_theme = ThemeType.WHITE
        self._width = width
        self._height = height
        self.set_theme(theme)

    @property
    def available(self) -> bool:
        return PYECHARTS_AVAILABLE

    # ------------------------------------------------------------------
    # 扫描图谱
    # ------------------------------------------------------------------

    def render_sweep(self, sweep: SweepResult, file_path: str) -> bool:
        """渲染稳定性扫描图谱

        Args:
            sweep: 扫描结果
            file_path: HTML输出路径

        Returns:
            bool: 是否渲染成功
        """
        if not PYECHARTS_AVAILABLE:
            logger.warning("⚠️ PyEcharts不可用，跳过HTML输出")
            return False

        a_labels = [f"{a:.4g}" for a in sweep.a_values]
        g_labels = [f"{g:.4g}" for g in sweep.gamma2_values]
        n_g = len(g_labels)
        data = [[idx // n_g, idx % n_g, int(cell.verdict_code)] for idx, cell in enumerate(sweep.cells)]

        heatmap = (
            HeatMap(init_opts=opts.InitOpts(width=self._width, height=self._height,
                                            theme=self._chart_theme))
            .add_xaxis(a_labels)
            .add_yaxis("verdict", g_labels, data, label_opts=opts.LabelOpts(is_show=False))
            .set_global_opts(
                title_opts=self._get_title_opts(f"等腰测地线相对平衡稳定性 (Γ₁ = {sweep.gamma1:g})",
                                                "横轴 a，纵轴 Γ₂"),
                tooltip_opts=self._get_tooltip_opts(),
                visualmap_opts=self._get_visualmap_opts(),
                xaxis_opts=self._get_xaxis_opts("a"),
                yaxis_opts=self._get_yaxis_opts("Γ₂"),
            )
        )
        return self._write_chart(heatmap, file_path, "稳定性图谱")

    # ------------------------------------------------------------------
    # 折线图
    # ------------------------------------------------------------------

    def render_trajectory(self, samples: List[TrajectorySample], file_path: str) -> bool:
        """渲染轨迹：各涡旋庞加莱圆盘坐标 (u, v) 随时间的变化"""
        if not PYECHARTS_AVAILABLE:
            logger.warning("⚠️ PyEcharts不可用，跳过HTML输出")
            return False

        times = [f"{s.t:.4g}" for s in samples]
        disk = np.array([poincare_disk(s.config.points) for s in samples])
        series = {}
        for i in range(disk.shape[1]):
            series[f"u{i + 1}"] = disk[:, i, 0]
            series[f"v{i + 1}"] = disk[:, i, 1]
        chart = self._create_line(times, series, "涡旋轨迹（庞加莱圆盘坐标）", "t")
        return self._write_chart(chart, file_path, "涡旋轨迹")

    def render_orbit(self, times, points, file_path: str, mu=None) -> bool:
        """渲染轨道曲线的 (x, y, z) 坐标随参数 t 的变化"""
        if not PYECHARTS_AVAILABLE:
            logger.warning("⚠️ PyEcharts不可用，跳过HTML输出")
            return False

        points = np.asarray(points, dtype=float).reshape(-1, 3)
        labels = [f"{t:.4g}" for t in times]
        subtitle = "μ̌ = ({:g}, {:g}, {:g})".format(*mu) if mu is not None else ""
        chart = self._create_line(labels, {"x": points[:, 0], "y": points[:, 1], "z": points[:, 2]},
                                  "轨道曲线 P_μ ∩ H₂", "t", subtitle)
        return self._write_chart(chart, file_path, "轨道曲线")

    def _create_line(self, x_labels: List[str], series: Dict[str, Any], title: str,
                     x_name: str, subtitle: str = "") -> "Line":
        line = (
            Line(init_opts=opts.InitOpts(width=self._width, height=self._height,
                                         theme=self._chart_theme))
            .add_xaxis(x_labels)
        )
        for name, values in series.items():
            line.add_yaxis(name, [float(v) for v in values], is_symbol_show=False,
                           label_opts=opts.LabelOpts(is_show=False))
        line.set_global_opts(
            title_opts=self._get_title_opts(title, subtitle),
            tooltip_opts=opts.TooltipOpts(trigger="axis"),
            xaxis_opts=self._get_xaxis_opts(x_name),
            yaxis_opts=opts.AxisOpts(type_="value", is_scale=True),
            datazoom_opts=self._get_datazoom_opts(),
            legend_opts=opts.LegendOpts(type_="scroll", pos_top="5%"),
        )
        return line

    # ------------------------------------------------------------------
    # 配置项
    # ------------------------------------------------------------------

    def _get_title_opts(self, title: str, subtitle: str = "") -> "opts.TitleOpts":
        return opts.TitleOpts(title=title, subtitle=subtitle, pos_left="center")

    def _get_tooltip_opts(self) -> "opts.TooltipOpts":
        return opts.TooltipOpts(is_show=True, trigger="item")

    def _get_visualmap_opts(self) -> "opts.VisualMapOpts":
        """按判定代码分段着色"""
        names = {code: modality.value for modality, code in VERDICT_CODES.items()}
        names[INVALID_CODE] = "invalid"
        pieces = [{"value": code, "label": f"{code} {names[code]}", "color": color}
                  for code, color in VERDICT_COLORS.items()]
        return opts.VisualMapOpts(is_piecewise=True, pieces=pieces, orient="vertical",
                                  pos_left="right", pos_top="middle")

    def _get_xaxis_opts(self, name: str) -> "opts.AxisOpts":
        return opts.AxisOpts(type_="category", name=name, splitarea_opts=opts.SplitAreaOpts(is_show=False))

    def _get_yaxis_opts(self, name: str) -> "opts.AxisOpts":
        return opts.AxisOpts(type_="category", name=name, splitarea_opts=opts.SplitAreaOpts(is_show=False))

    def _get_datazoom_opts(self) -> List["opts.DataZoomOpts"]:
        return [opts.DataZoomOpts(type_="inside"), opts.DataZoomOpts(type_="slider")]

    # ------------------------------------------------------------------
    # 输出
    # ------------------------------------------------------------------

    def _generate_html(self, chart, title: str) -> str:
        """把 render_embed 的片段套进完整的HTML文档"""
        return HTML_TEMPLATE.format(title=title, chart_html=chart.render_embed())

    def _write_chart(self, chart, file_path: str, title: str) -> bool:
        try:
            html_content = self._generate_html(chart, title)
            directory = os.path.dirname(file_path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(file_path, 'w', encoding='utf-8') as f:
                f.write(html_content)
        except Exception as e:
            logger.error(f"❌ 渲染图表失败: {str(e)}")
            return False
        logger.info(f"✅ 已生成图表: {file_path}")
        return True

    def set_theme(self, theme: str) -> None:
        """设置图表主题

        Args:
            theme: 主题名称 ("white", "dark")
        """
        theme_mapping = {
            "white": ThemeType.WHITE,
            "dark": ThemeType.DARK,
        }
        self._chart_theme = theme_mapping.get(theme, ThemeType.WHITE)
