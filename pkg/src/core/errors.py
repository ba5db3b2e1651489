#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
异常定义模块
双曲涡旋工具的统一异常层次，库函数只负责抛出，命令层负责转换为退出码
"""

from typing import Any, List, Optional


class HypervortexError(Exception):
    """所有工具异常的基类"""


class InvalidPointError(HypervortexError, ValueError):
    """点不在上半双曲面上，或内积参数超出 arccosh 定义域"""


class ContractViolation(HypervortexError, ValueError):
    """调用前置条件不满足（非零迹矩阵、非切向量、非相对平衡等）"""


class CollisionError(HypervortexError):
    """两个涡旋重合或过近，能量与速度场在此处发散"""


class DegenerateMomentumError(HypervortexError):
    """动量 μ 为零，无法定义轨道或法空间"""


class DegenerateTriangleError(HypervortexError):
    """等边三角形尺寸 k ≤ 1"""


class InvalidGeometryError(HypervortexError, ValueError):
    """几何参数超出允许范围"""


class IndeterminateError(HypervortexError):
    """线性条件的系数退化，解不唯一或不存在"""


class InvalidDirectionsError(HypervortexError):
    """span(D₁, D₂) 中包含某个涡旋"""


class DegenerateBasisError(HypervortexError):
    """辛法空间基底退化（核维数不为 1 或 η、ζ 线性相关）"""


class CalibrationError(HypervortexError):
    """标定常数在不同探针之间不一致"""


class ScenarioError(HypervortexError, ValueError):
    """场景文件格式错误

    Args:
        message: 错误描述
        field: 出错字段路径，例如 ``vortices[1].gamma``
    """

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message)


class IntegrationFailure(HypervortexError):
    """积分失败（步长下溢或涡旋接近碰撞）

    Attributes:
        last_sample: 最后一个有效采样
        samples: 失败前已经得到的全部采样
        diagnostic: 结构化诊断信息
    """

    def __init__(self, message: str, last_sample: Any = None,
                 samples: Optional[List[Any]] = None, diagnostic: Optional[dict] = None):
        super().__init__(message)
        self.last_sample = last_sample
        self.samples = samples or []
        self.diagnostic = diagnostic or {}
