#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
双曲几何模块
在三维环境空间中嵌入的双曲面模型 H₂ 上提供内积、双曲叉积、距离与投影等基本运算

所有函数都是纯函数，输入输出均为 numpy 数组，可以安全地在线程之间共享。
"""

import numpy as np

from .errors import InvalidPointError

# 双曲面上的数值容差（双精度舍入误差量级）
TOL_H2 = 1e-12


def as_vec3(v) -> np.ndarray:
    """转换为形状为 (3,) 的浮点数组

    Args:
        v: 任意长度为 3 的序列

    Returns:
        np.ndarray: 三维向量
    """
    arr = np.asarray(v, dtype=float)
    if arr.shape[-1] != 3:
        raise ValueError(f"需要三维向量，得到形状 {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("向量分量必须是有限数")
    return arr


def minkowski_dot(u, v) -> float:
    """双曲内积 ⟨u, v⟩_H = u.x·v.x + u.y·v.y − u.z·v.z

    支持末维为 3 的批量数组，按最后一维逐对计算。
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1] - u[..., 2] * v[..., 2]


def hcross(u, v) -> np.ndarray:
    """双曲叉积 u ×_H v

    与两个因子都是 ⟨·,·⟩_H 正交的。等价于把欧氏叉积的 z 分量取反。

    Args:
        u: 第一个向量
        v: 第二个向量

    Returns:
        np.ndarray: (u.y·v.z − u.z·v.y, u.z·v.x − u.x·v.z, −u.x·v.y + u.y·v.x)
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return np.stack([
        u[..., 1] * v[..., 2] - u[..., 2] * v[..., 1],
        u[..., 2] * v[..., 0] - u[..., 0] * v[..., 2],
        -u[..., 0] * v[..., 1] + u[..., 1] * v[..., 0],
    ], axis=-1)


def lift(x: float, y: float) -> np.ndarray:
    """把平面坐标 (x, y) 提升到上半双曲面 z = √(1 + x² + y²)

    Args:
        x: x 坐标
        y: y 坐标

    Returns:
        np.ndarray: 双曲面上的点
    """
    x = float(x)
    y = float(y)
    if not (np.isfinite(x) and np.isfinite(y)):
        raise InvalidPointError(f"坐标必须是有限数: ({x}, {y})")
    return np.array([x, y, np.sqrt(1.0 + x * x + y * y)])


def renormalize(v) -> np.ndarray:
    """丢弃 z 分量并按 (x, y) 重新计算，把漂移的点拉回 H₂"""
    v = np.asarray(v, dtype=float)
    return lift(v[0], v[1])


def renormalize_points(points) -> np.ndarray:
    """对 (N, 3) 点阵逐行执行 renormalize"""
    pts = np.array(points, dtype=float, copy=True)
    pts[:, 2] = np.sqrt(1.0 + pts[:, 0] ** 2 + pts[:, 1] ** 2)
    return pts


def h2_residual(v) -> float:
    """|⟨v, v⟩_H + 1|，支持批量输入时取最大值"""
    return float(np.max(np.abs(minkowski_dot(v, v) + 1.0)))


def is_hpoint(v, tol: float = TOL_H2) -> bool:
    """判断是否为上半双曲面上的合法点

    容差按 max(1, z²) 放大，以适应远离顶点处的舍入误差。
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (3,) or not np.all(np.isfinite(v)):
        return False
    scale = max(1.0, v[2] * v[2])
    return bool(abs(minkowski_dot(v, v) + 1.0) <= tol * scale and v[2] >= 1.0 - tol)


def hdistance(p, q, tol: float = TOL_H2) -> float:
    """双曲距离 d = arccosh(−⟨p, q⟩_H)

    参数在 1 − tol 以内时截断到 1 以吸收舍入误差。

    Args:
        p: 第一个点
        q: 第二个点
        tol: 截断窗口

    Returns:
        float: 非负距离

    Raises:
        InvalidPointError: 参数明显小于 1
    """
    arg = -float(minkowski_dot(p, q))
    window = tol * max(1.0, abs(arg))
    if arg < 1.0 - window:
        raise InvalidPointError(f"arccosh 参数小于 1: {arg!r}")
    return float(np.arccosh(max(arg, 1.0)))


def coplanarity(p1, p2, p3) -> float:
    """V = ⟨p1, p2 ×_H p3⟩_H，三点共测地线当且仅当 V = 0"""
    return float(minkowski_dot(p1, hcross(p2, p3)))
