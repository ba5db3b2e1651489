#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
相对平衡模块
负责相对平衡的判定与求解，包括：
- 角速度 ξ 与拉格朗日乘子 λ 的线性最小二乘求解
- 等边三角形族与测地线族的构造
- 测地线相对平衡条件的求解（给定几何求 Γ₃，给定涡量求几何）
- 固定平衡（速度场恒为零）的判定
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Tuple

import numpy as np
from scipy.optimize import brentq

from .dynamics import Configuration, METRIC, momentum, velocity
from .errors import DegenerateTriangleError, IndeterminateError, InvalidGeometryError
from .hypgeo import coplanarity, hdistance, lift, minkowski_dot
from .sl2 import algebra_exp, mobius_lift

logger = logging.getLogger(__name__)

# 相对平衡残差阈值（按 max|Γ| 缩放后的梯度）
TOL_RE = 1e-8
# 相对平衡的实际运动为 Ẋᵣ = (2ξ̌) ×_H X̌ᵣ
FLOW_GENERATOR_FACTOR = 2.0


@dataclass
class REReport:
    """相对平衡求解结果

    Attributes:
        xi: 角速度 ξ̌
        lambdas: 拉格朗日乘子 λᵣ
        residual: 驻点方程的最小二乘残差
        flow_generator: 构型实际绕之旋转的生成元 2ξ̌
    """

    xi: np.ndarray
    lambdas: np.ndarray
    residual: float
    flow_generator: np.ndarray

    def to_dict(self) -> Dict:
        return {
            "xi": self.xi.tolist(),
            "lambdas": self.lambdas.tolist(),
            "residual": float(self.residual),
            "flow_generator": self.flow_generator.tolist(),
        }


class GeodesicGeometry(NamedTuple):
    """规范测地线构型：X₂ 位于顶点，三点都在平面 y = 0 上"""

    points: np.ndarray
    L12: float
    L23: float
    L13: float


def interaction_sums(points: np.ndarray, gammas: np.ndarray) -> np.ndarray:
    """bᵣ = (1/2π) Σ_{p≠r} Γ_p X_p / L_pr"""
    s = points @ METRIC @ points.T
    denom = s * s - 1.0
    np.fill_diagonal(denom, np.inf)
    return (gammas[:, None] / denom).T @ points / (2.0 * np.pi)


def re_multipliers(config: Configuration) -> REReport:
    """求解角速度方程 ξ = (1/2π) Σ_{p≠r} Γ_p X_p / L_pr + (λᵣ/Γᵣ) Xᵣ

    3N 个方程、3 + N 个未知量 (ξ, ν)，ν_r = λᵣ/Γᵣ。每组方程乘以 Γᵣ 后即为增广
    哈密顿量的梯度，最小二乘残差按 max|Γ| 缩放后作为相对平衡证书。
    """
    points, gammas = config.points, config.gammas
    n = config.n
    b = interaction_sums(points, gammas)

    a_matrix = np.zeros((3 * n, 3 + n))
    rhs = np.zeros(3 * n)
    for r in range(n):
        rows = slice(3 * r, 3 * r + 3)
        a_matrix[rows, :3] = gammas[r] * np.eye(3)
        a_matrix[rows, 3 + r] = -gammas[r] * points[r]
        rhs[rows] = gammas[r] * b[r]

    solution, *_ = np.linalg.lstsq(a_matrix, rhs, rcond=None)
    scale = float(np.max(np.abs(gammas)))
    residual = float(np.linalg.norm(a_matrix @ solution - rhs)) / scale

    xi = solution[:3]
    lambdas = gammas * solution[3:]
    return REReport(xi=xi, lambdas=lambdas, residual=residual,
                    flow_generator=FLOW_GENERATOR_FACTOR * xi)


def is_relative_equilibrium(config: Configuration, tol_re: float = TOL_RE) -> Tuple[bool, REReport]:
    """判断是否为增广哈密顿量的驻点，总是同时返回求解报告"""
    if tol_re <= 0:
        raise ValueError("tol_re 必须为正")
    report = re_multipliers(config)
    return report.residual <= tol_re, report


def make_equilateral(k: float, gammas) -> Configuration:
    """构造两两内积为 −k 的等边三角形

    三点位于同一高度 z = √(1 + r²)，r = √(2(k − 1)/3)，方位角 0°、120°、240°。

    Args:
        k: 尺寸参数，⟨Xᵢ, Xⱼ⟩_H = −k
        gammas: 三个涡量

    Raises:
        DegenerateTriangleError: k ≤ 1
    """
    if not k > 1.0:
        raise DegenerateTriangleError(f"等边三角形需要 k > 1，得到 {k}")
    r = np.sqrt(2.0 * (k - 1.0) / 3.0)
    angles = np.deg2rad([0.0, 120.0, 240.0])
    points = np.array([lift(r * np.cos(t), r * np.sin(t)) for t in angles])
    return Configuration(points, gammas)


def equilateral_xi(k: float, gammas) -> np.ndarray:
    """等边相对平衡的角速度 ξ̌ = μ̌ / (2π(k² − 1))"""
    config = make_equilateral(k, gammas)
    return momentum(config) / (2.0 * np.pi * (k * k - 1.0))


def equilateral_det_mu(k: float, gammas) -> float:
    """等边构型的 det μ = ΣΓᵢ² + 2k·Σ_{i<j} ΓᵢΓⱼ"""
    g = np.asarray(gammas, dtype=float)
    pair_sum = g[0] * g[1] + g[1] * g[2] + g[0] * g[2]
    return float(np.sum(g * g) + 2.0 * k * pair_sum)


def geodesic_config(x1: float, x3: float) -> GeodesicGeometry:
    """规范测地线构型 X₁ = (x₁, 0, √(1+x₁²))，X₂ = (0, 0, 1)，X₃ = (−x₃, 0, √(1+x₃²))

    Returns:
        GeodesicGeometry: 三个点以及 L₁₂ = x₁²、L₂₃ = x₃²、L₁₃ = ⟨X₁, X₃⟩² − 1
    """
    if not (x1 > 0 and x3 > 0):
        raise InvalidGeometryError(f"x1、x3 必须为正: ({x1}, {x3})")
    points = np.array([lift(x1, 0.0), lift(0.0, 0.0), lift(-x3, 0.0)])
    s13 = float(minkowski_dot(points[0], points[2]))
    return GeodesicGeometry(points=points, L12=x1 * x1, L23=x3 * x3, L13=s13 * s13 - 1.0)


def geodesic_re_residual(gammas, L12: float, L23: float, L13: float) -> float:
    """测地线相对平衡条件的左端

    √L₂₃(L₁₃ − L₁₂)Γ₁ + √L₁₃(L₂₃ − L₁₂)Γ₂ + √L₁₂(L₂₃ − L₁₃)Γ₃
    """
    g1, g2, g3 = np.asarray(gammas, dtype=float)
    return float(np.sqrt(L23) * (L13 - L12) * g1
                 + np.sqrt(L13) * (L23 - L12) * g2
                 + np.sqrt(L12) * (L23 - L13) * g3)


def solve_geodesic_gamma(x1: float, x3: float, gamma1: float, gamma2: float) -> float:
    """给定几何与 Γ₁、Γ₂，求使测地线条件成立的唯一 Γ₃

    Raises:
        IndeterminateError: 系数 √L₁₂(L₂₃ − L₁₃) 接近零
    """
    geometry = geodesic_config(x1, x3)
    coefficient = np.sqrt(geometry.L12) * (geometry.L23 - geometry.L13)
    if abs(coefficient) < 1e-12:
        raise IndeterminateError("Γ₃ 的系数为零，条件与 Γ₃ 无关")
    partial = geodesic_re_residual((gamma1, gamma2, 0.0), geometry.L12, geometry.L23, geometry.L13)
    return float(-partial / coefficient)


def geodesic_configuration(x1: float, x3: float, gammas) -> Configuration:
    """带涡量的规范测地线构型"""
    return Configuration(geodesic_config(x1, x3).points, gammas)


def solve_geodesic_geometry(gammas, x1: float, x3_min: float = 1e-3, x3_max: float = 1e3,
                            scan_points: int = 400, xtol: float = 1e-12) -> List[float]:
    """给定涡量与 x₁，求测地线相对平衡的全部 x₃

    在 (x3_min, x3_max] 的对数网格上找符号变化，再用 brentq 精确求根。

    Returns:
        List[float]: 升序排列的根，可能为空
    """
    if not x1 > 0:
        raise InvalidGeometryError(f"x1 必须为正: {x1}")

    def f(x3: float) -> float:
        geometry = geodesic_config(x1, x3)
        return geodesic_re_residual(gammas, geometry.L12, geometry.L23, geometry.L13)

    grid = np.geomspace(x3_min, x3_max, scan_points)
    values = np.array([f(x) for x in grid])
    roots: List[float] = []
    for i in range(len(grid) - 1):
        if values[i] == 0.0:
            roots.append(float(grid[i]))
        elif values[i] * values[i + 1] < 0.0:
            roots.append(float(brentq(f, grid[i], grid[i + 1], xtol=xtol, rtol=4 * np.finfo(float).eps)))
    if values[-1] == 0.0:
        roots.append(float(grid[-1]))

    unique: List[float] = []
    for root in sorted(roots):
        if not unique or abs(root - unique[-1]) > 1e-9 * max(1.0, root):
            unique.append(root)
    logger.debug(f"x1 = {x1:g} 时找到 {len(unique)} 个测地线相对平衡")
    return unique


def canonicalize_geodesic(config: Configuration) -> Tuple[np.ndarray, Configuration]:
    """用 SL(2,ℝ) 元素把三点构型移到规范测地线坐标系

    先做椭圆旋转把 X₂ 转到 +x 轴，再沿 x–z 平面做双曲推动把 X₂ 移到顶点，
    最后再旋转使 X₁ 落在 y = 0 且 x > 0 的半平面上。

    Returns:
        Tuple[np.ndarray, Configuration]: 群元素 g 与移动后的构型
    """
    x2 = config.points[1]
    phi = np.arctan2(x2[1], x2[0])
    radius = np.hypot(x2[0], x2[1])
    # 旋转 exp(θe₃) 的提升把方位角减小 2θ
    rotate = algebra_exp((0.0, 0.0, 1.0), phi / 2.0)
    # 推动 exp(s·ê) 的提升在 x–z 平面内的快度为 −2s
    boost = algebra_exp((0.0, 1.0, 0.0), np.arcsinh(radius) / 2.0)
    g = boost @ rotate
    moved = config.points @ mobius_lift(g).T
    psi = np.arctan2(moved[0, 1], moved[0, 0])
    g = algebra_exp((0.0, 0.0, 1.0), psi / 2.0) @ g
    return g, config.transformed(g)


def re_shape(config: Configuration, tol: float = 1e-6) -> str:
    """三涡旋相对平衡的形状标签：equilateral / geodesic / neither"""
    if config.n != 3:
        return "n/a"
    p = config.points
    d = np.array([hdistance(p[0], p[1]), hdistance(p[1], p[2]), hdistance(p[0], p[2])])
    if np.max(d) - np.min(d) <= tol * max(1.0, np.max(d)):
        return "equilateral"
    scale = max(1.0, float(np.prod(np.linalg.norm(p, axis=1))))
    if abs(coplanarity(p[0], p[1], p[2])) <= tol * scale:
        return "geodesic"
    return "neither"


def isosceles_config(gamma1: float, gamma2: float, a: float) -> Configuration:
    """等腰测地线构型：Γ₁ = Γ₃，⟨X₁, X₂⟩_H = a，x₁ = x₃ = √(a² − 1)"""
    if not a < -1.0:
        raise InvalidGeometryError(f"等腰构型需要 a < −1，得到 {a}")
    x = np.sqrt(a * a - 1.0)
    return geodesic_configuration(x, x, (gamma1, gamma2, gamma1))


def isosceles_fixed_gamma2(gamma1: float, a: float) -> float:
    """使等腰测地线构型速度场恒为零的 Γ₂ = Γ₁/(2a)

    它不同于循环和条件给出的代数曲线 Γ₁a/(1 − a)（见 algebraic_fixed_gamma2）：
    后者上速度场一般不为零，两者只在 a = −1 处重合，都给出 −Γ₁/2。

    Raises:
        InvalidGeometryError: a > −1
    """
    if a > -1.0:
        raise InvalidGeometryError(f"a = ⟨X₁, X₂⟩_H 必须 ≤ −1，得到 {a}")
    return gamma1 / (2.0 * a)


def algebraic_fixed_gamma2(gamma1: float, a: float) -> float:
    """循环和条件 Σ Γᵢ(Γⱼ + Γₖ)Xᵢ = 0 在等腰族上给出的 Γ₂ = Γ₁a/(1 − a)"""
    if a > -1.0:
        raise InvalidGeometryError(f"a = ⟨X₁, X₂⟩_H 必须 ≤ −1，得到 {a}")
    return gamma1 * a / (1.0 - a)


def zero_momentum_gamma2(gamma1: float, a: float) -> float:
    """等腰测地线族上 μ = 0 的曲线 Γ₂ = 2aΓ₁"""
    return 2.0 * a * gamma1


def fixed_equilibrium_residual(config: Configuration) -> float:
    """循环和 ‖Σᵢ Γᵢ(Γⱼ + Γₖ)Xᵢ‖（仅 N = 3）"""
    if config.n != 3:
        raise ValueError("循环和条件只对三涡旋定义")
    g = config.gammas
    weights = np.array([g[0] * (g[1] + g[2]), g[1] * (g[2] + g[0]), g[2] * (g[0] + g[1])])
    return float(np.linalg.norm(weights @ config.points))


def fixed_equilibrium_report(config: Configuration, tol: float = 1e-10) -> Dict:
    """固定平衡判定的详细结果

    判定以 ‖velocity‖ ≤ tol·max(1, max|Γ|) 为准；N = 3 时附带循环和残差。
    """
    scale = max(1.0, float(np.max(np.abs(config.gammas))))
    speed = float(np.max(np.linalg.norm(velocity(config), axis=1)))
    report = {
        "is_fixed": speed <= tol * scale,
        "velocity_norm": speed,
        "algebraic_residual": None,
        "pair_sum": None,
    }
    if config.n == 3:
        g = config.gammas
        report["algebraic_residual"] = fixed_equilibrium_residual(config)
        report["pair_sum"] = float(g[0] * g[1] + g[1] * g[2] + g[0] * g[2])
    return report


def is_fixed_equilibrium(config: Configuration, tol: float = 1e-10) -> bool:
    """速度场在该构型处是否恒为零（单涡旋总是固定点）"""
    return bool(fixed_equilibrium_report(config, tol)["is_fixed"])
