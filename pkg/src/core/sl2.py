#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
SL(2,ℝ) 对称层模块
负责群元素、李代数与对偶空间在 ℝ³ 上的表示、Möbius 提升、余伴随作用、
动量类型分类以及单参数子群轨道

李代数元素 ξ 与对偶元素 μ 共用同一种表示：
    ξ̌ = (x, y, z)  ↔  [[x, y+z], [y−z, −x]]
配对 ⟨μ, ξ⟩ = ½ tr(ξμ) 在这种表示下正好等于 ⟨μ̌, ξ̌⟩_H。
"""

import logging
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from .errors import CalibrationError, ContractViolation, DegenerateMomentumError
from .hypgeo import hcross, minkowski_dot

logger = logging.getLogger(__name__)

# 群元素行列式容差
DET_TOL = 1e-10
# vee 的零迹容差
TRACE_TOL = 1e-12
# algebra_exp 在抛物分支附近改用级数展开
SERIES_THRESHOLD = 1e-12
# 生成元标定常数的候选值
FLOW_CONSTANT_CANDIDATES = (-2.0, -1.0, 1.0, 2.0)


class MomentumType(str, Enum):
    """动量类型（余伴随轨道按 det μ 的符号分类）"""

    ZERO = "zero"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


# 各类动量对应的迷向子群矩阵族
ISOTROPY_DESCRIPTIONS = {
    MomentumType.ZERO: "whole group SL(2,R)",
    MomentumType.ELLIPTIC: "rotation [[cos t, sin t], [-sin t, cos t]]",
    MomentumType.PARABOLIC: "upper-triangular unipotent [[1, t], [0, 1]]",
    MomentumType.HYPERBOLIC: "diagonal [[e^t, 0], [0, e^-t]]",
}


class MomentumClassification(NamedTuple):
    """classify_momentum 的结果

    sheet 为 μ̌.z 的符号，用来区分椭圆与抛物情形下锥面的两个分支；
    零动量与双曲情形为 0。
    """

    type: MomentumType
    det_mu: float
    sheet: int


def group_element(a: float, b: float, c: float, d: float, tol: float = DET_TOL) -> np.ndarray:
    """构造 SL(2,ℝ) 元素并校验行列式

    Args:
        a, b, c, d: 矩阵 [[a, b], [c, d]] 的元素
        tol: 行列式容差

    Returns:
        np.ndarray: 2×2 矩阵

    Raises:
        ContractViolation: ad − bc 偏离 1 超过容差
    """
    g = np.array([[a, b], [c, d]], dtype=float)
    return check_group_element(g, tol)


def check_group_element(g, tol: float = DET_TOL) -> np.ndarray:
    """校验 2×2 矩阵的行列式为 1"""
    g = np.asarray(g, dtype=float)
    if g.shape != (2, 2):
        raise ContractViolation(f"群元素必须是 2×2 矩阵，得到 {g.shape}")
    det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
    if abs(det - 1.0) > tol:
        raise ContractViolation(f"群元素行列式不为 1: {det!r}")
    return g


def group_inverse(g) -> np.ndarray:
    """SL(2,ℝ) 元素的逆 [[d, −b], [−c, a]]"""
    g = np.asarray(g, dtype=float)
    return np.array([[g[1, 1], -g[0, 1]], [-g[1, 0], g[0, 0]]])


def hat(v) -> np.ndarray:
    """ℝ³ → 零迹 2×2 矩阵：(x, y, z) ↦ [[x, y+z], [y−z, −x]]"""
    x, y, z = np.asarray(v, dtype=float)
    return np.array([[x, y + z], [y - z, -x]])


def vee(m, tol: float = TRACE_TOL) -> np.ndarray:
    """hat 的逆映射

    Args:
        m: 零迹 2×2 矩阵
        tol: 迹的容差

    Returns:
        np.ndarray: (m₀₀, (m₀₁+m₁₀)/2, (m₀₁−m₁₀)/2)

    Raises:
        ContractViolation: 矩阵的迹不为零
    """
    m = np.asarray(m, dtype=float)
    trace = m[0, 0] + m[1, 1]
    if abs(trace) > tol * max(1.0, float(np.max(np.abs(m)))):
        raise ContractViolation(f"矩阵不是零迹的: tr = {trace!r}")
    return np.array([
        0.5 * (m[0, 0] - m[1, 1]),
        0.5 * (m[0, 1] + m[1, 0]),
        0.5 * (m[0, 1] - m[1, 0]),
    ])


def mobius_lift(g) -> np.ndarray:
    """SL(2,ℝ) → 3×3 规范化 Möbius 变换 g̃

    g̃ 保持 ⟨·,·⟩_H 并把 H₂ 映到自身，满足 g̃·μ̌ = vee(g·hat(μ̌)·g⁻¹)。
    """
    (a, b), (c, d) = np.asarray(g, dtype=float)
    return 0.5 * np.array([
        [2.0 * (a * d + b * c), -2.0 * (a * c - b * d), -2.0 * (a * c + b * d)],
        [-2.0 * (a * b - c * d), a * a - b * b - c * c + d * d, a * a + b * b - c * c - d * d],
        [-2.0 * (a * b + c * d), a * a - b * b + c * c - d * d, a * a + b * b + c * c + d * d],
    ])


def coadjoint(g, mu) -> np.ndarray:
    """余伴随作用 Ad*_{g⁻¹} μ = g μ g⁻¹，返回其 ̌ 坐标"""
    g = np.asarray(g, dtype=float)
    return vee(g @ hat(mu) @ group_inverse(g), tol=1e-9)


def bracket(xi, eta) -> np.ndarray:
    """李括号 [ξ, η]，等于 −2(ξ̌ ×_H η̌)"""
    a = hat(xi)
    b = hat(eta)
    return vee(a @ b - b @ a, tol=1e-9)


def pairing(mu, xi) -> float:
    """自然配对 ⟨μ, ξ⟩ = ½ tr(ξμ)"""
    return 0.5 * float(np.trace(hat(xi) @ hat(mu)))


def det_mu(mu) -> float:
    """det(hat(μ̌)) = −⟨μ̌, μ̌⟩_H"""
    return -float(minkowski_dot(mu, mu))


def classify_momentum(mu, tol: Optional[float] = None) -> MomentumClassification:
    """按 det μ 的符号对动量分类

    Args:
        mu: 动量的 ̌ 坐标
        tol: 分类容差，默认 1e−9·max(1, ‖μ̌‖²)

    Returns:
        MomentumClassification: 类型、det μ 与锥面分支
    """
    mu = np.asarray(mu, dtype=float)
    norm = float(np.linalg.norm(mu))
    if tol is None:
        tol = 1e-9 * max(1.0, norm * norm)
    if tol <= 0:
        raise ContractViolation("分类容差必须为正")

    det = det_mu(mu)
    if norm <= tol:
        return MomentumClassification(MomentumType.ZERO, det, 0)
    sheet = int(np.sign(mu[2]))
    if det > tol:
        return MomentumClassification(MomentumType.ELLIPTIC, det, sheet)
    if det < -tol:
        return MomentumClassification(MomentumType.HYPERBOLIC, det, 0)
    return MomentumClassification(MomentumType.PARABOLIC, det, sheet)


def algebra_exp(xi, t: float = 1.0) -> np.ndarray:
    """零迹矩阵 tξ 的闭式指数

    利用 M² = Δ·I（Δ = −det M）：
        Δ > 0:  cosh√Δ·I + (sinh√Δ/√Δ)·M
        Δ < 0:  cos√−Δ·I + (sin√−Δ/√−Δ)·M
        |Δ| 很小时取级数 I + M + M²/2
    """
    m = float(t) * hat(xi)
    delta = -(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    identity = np.eye(2)
    if abs(delta) < SERIES_THRESHOLD:
        return (1.0 + 0.5 * delta) * identity + m
    if delta > 0:
        s = np.sqrt(delta)
        return np.cosh(s) * identity + (np.sinh(s) / s) * m
    s = np.sqrt(-delta)
    return np.cos(s) * identity + (np.sin(s) / s) * m


def cross_matrix(xi) -> np.ndarray:
    """3×3 矩阵 M_ξ，满足 M_ξ v = ξ̌ ×_H v"""
    x, y, z = np.asarray(xi, dtype=float)
    return np.array([
        [0.0, -z, y],
        [z, 0.0, -x],
        [y, -x, 0.0],
    ])


def orbit_curve(mu, nu, t: float) -> np.ndarray:
    """μ 的迷向子群作用下 ν 的轨道曲线 P_μ ∩ H₂

    Args:
        mu: 非零动量
        nu: 起点（H₂ 上的点）
        t: 曲线参数

    Returns:
        np.ndarray: g̃(exp tμ)·ν

    Raises:
        DegenerateMomentumError: μ = 0
    """
    mu = np.asarray(mu, dtype=float)
    if np.linalg.norm(mu) <= 1e-12:
        raise DegenerateMomentumError("μ = 0 时轨道曲线没有定义")
    return mobius_lift(algebra_exp(mu, t)) @ np.asarray(nu, dtype=float)


def random_group_element(rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """由随机李代数元素取指数得到的群元素"""
    xi = rng.normal(scale=scale, size=3)
    return algebra_exp(xi, 1.0)


def _nearest_candidate(value: float, candidates) -> float:
    return min(candidates, key=lambda c: abs(c - value))


def calibrate_flow_constant(n_probes: int = 100, rng: Optional[np.random.Generator] = None,
                            step: float = 1e-6, tol: float = 1e-5) -> dict:
    """用有限差分确定生成元常数 c

    d/dt|₀ g̃(exp tξ)·v = c·(ξ̌ ×_H v)，c 取自 {−2, −1, 1, 2}。

    Args:
        n_probes: 随机探针个数
        rng: 随机数生成器
        step: 中心差分步长
        tol: 与候选值的最大允许偏差

    Returns:
        dict: {"constant", "max_deviation", "n_probes"}

    Raises:
        CalibrationError: 探针之间结果不一致
    """
    rng = rng or np.random.default_rng(0)
    chosen = None
    max_dev = 0.0
    used = 0
    while used < n_probes:
        xi = rng.normal(size=3)
        v = rng.normal(size=3)
        w = hcross(xi, v)
        w_norm = float(np.linalg.norm(w))
        if w_norm < 1e-3:
            continue
        forward = mobius_lift(algebra_exp(xi, step)) @ v
        backward = mobius_lift(algebra_exp(xi, -step)) @ v
        derivative = (forward - backward) / (2.0 * step)
        ratio = float(np.dot(derivative, w) / np.dot(w, w))
        candidate = _nearest_candidate(ratio, FLOW_CONSTANT_CANDIDATES)
        deviation = float(np.linalg.norm(derivative - candidate * w)) / w_norm
        if chosen is None:
            chosen = candidate
        if candidate != chosen or deviation > tol:
            raise CalibrationError(
                f"生成元常数不一致: 候选 {candidate} / 已选 {chosen}, 偏差 {deviation:.3e}")
        max_dev = max(max_dev, deviation)
        used += 1

    logger.info(f"✅ 生成元常数标定完成: c = {chosen:+g}（最大偏差 {max_dev:.2e}）")
    return {"constant": chosen, "max_deviation": max_dev, "n_probes": used}
