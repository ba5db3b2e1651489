#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
涡旋动力学模块
负责 N 涡旋相空间、速度场、哈密顿量、动量映射以及带漂移监控的自适应积分器

相空间为 M = H₂ × ⋯ × H₂ ∖ Δ，点阵统一存为 (N, 3) 数组。
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from scipy.integrate import RK45
from scipy.interpolate import CubicHermiteSpline
from scipy.linalg import expm

from .errors import (CalibrationError, CollisionError, ContractViolation, IntegrationFailure,
                     InvalidPointError)
from .hypgeo import hcross, is_hpoint, lift, minkowski_dot, renormalize_points
from .sl2 import calibrate_flow_constant, cross_matrix, mobius_lift

logger = logging.getLogger(__name__)

# 闵可夫斯基度量 diag(1, 1, −1)
METRIC = np.diag([1.0, 1.0, -1.0])
# 两点最小允许距离（碰撞集 Δ 的排除半径）
MIN_DISTANCE = 1e-9
# 速度场分母 L = ⟨X_p, X_r⟩² − 1 的碰撞阈值
COLLISION_DENOMINATOR = 1e-14
# KKS 常数的候选值
KKS_CONSTANT_CANDIDATES = (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0)
# RK45 每次尝试的函数求值次数
_EVALS_PER_ATTEMPT = 6
# 守恒量投影的相对收敛阈值
PROJECTION_TOL = 1e-14
# ∇H 在 μ̌ 约束零空间中的分量低于该比例时不修正 H
ENERGY_PROJECTION_RATIO = 1e-3


@dataclass(frozen=True)
class Configuration:
    """相空间中的一个点：N 个互不相同的双曲面点及其非零涡量

    Attributes:
        points: (N, 3) 环境坐标
        gammas: (N,) 涡量 Γᵢ
    """

    points: np.ndarray
    gammas: np.ndarray

    def __post_init__(self):
        points = np.array(self.points, dtype=float).reshape(-1, 3)
        gammas = np.array(self.gammas, dtype=float).reshape(-1)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "gammas", gammas)

        if len(points) < 1:
            raise ContractViolation("至少需要一个涡旋")
        if len(points) != len(gammas):
            raise ContractViolation(f"点数 {len(points)} 与涡量个数 {len(gammas)} 不一致")
        if not np.all(np.isfinite(gammas)) or np.any(gammas == 0.0):
            raise ContractViolation(f"涡量必须是非零有限数: {gammas.tolist()}")
        for i, p in enumerate(points):
            if not is_hpoint(p):
                raise InvalidPointError(f"第 {i + 1} 个涡旋不在 H₂ 上: {p.tolist()}")
        distance = min_pair_distance(points)
        if distance <= MIN_DISTANCE:
            raise CollisionError(f"涡旋重合（最小距离 {distance:.3e}）")

    @classmethod
    def trusted(cls, points: np.ndarray, gammas: np.ndarray) -> "Configuration":
        """跳过校验直接构造，供积分器内部使用"""
        obj = object.__new__(cls)
        object.__setattr__(obj, "points", np.asarray(points, dtype=float))
        object.__setattr__(obj, "gammas", np.asarray(gammas, dtype=float))
        return obj

    @classmethod
    def from_xy(cls, xy, gammas) -> "Configuration":
        """由平面坐标 (x, y) 提升得到构型"""
        xy = np.asarray(xy, dtype=float).reshape(-1, 2)
        return cls(np.array([lift(x, y) for x, y in xy]), gammas)

    @property
    def n(self) -> int:
        return len(self.gammas)

    def transformed(self, g) -> "Configuration":
        """群作用 g·X = g̃X（g 为 2×2 群元素或 3×3 提升矩阵）"""
        g = np.asarray(g, dtype=float)
        matrix = mobius_lift(g) if g.shape == (2, 2) else g
        return Configuration.trusted(self.points @ matrix.T, self.gammas.copy())


@dataclass
class IntegratorConfig:
    """积分器参数

    Attributes:
        rel_tol: 相对容差
        abs_tol: 绝对容差
        max_step: 最大步长
        renormalize_each_step: 每个接受步后把点拉回 H₂
        preserve_invariants: 拉回 H₂ 时同时保持初始的 H 与 μ̌
        collision_distance: 近碰撞判据，小于该距离即终止
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = 0.05
    renormalize_each_step: bool = True
    preserve_invariants: bool = True
    collision_distance: float = 1e-6

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ContractViolation("积分容差必须为正")
        if self.max_step <= 0:
            raise ContractViolation("最大步长必须为正")

    @classmethod
    def from_dict(cls, data: Dict) -> "IntegratorConfig":
        """从配置字典构造，忽略无关键"""
        keys = ("rel_tol", "abs_tol", "max_step", "renormalize_each_step", "preserve_invariants",
                "collision_distance")
        return cls(**{k: data[k] for k in keys if k in data})


@dataclass
class TrajectorySample:
    """轨迹上的一个采样点"""

    t: float
    config: Configuration
    H: float
    mu: np.ndarray
    h2_residual: float
    step_stats: Dict[str, int] = field(default_factory=dict)


def min_pair_distance(points) -> float:
    """最小两两双曲距离，单点时返回 inf

    用弦长 ⟨Xᵢ − Xⱼ, Xᵢ − Xⱼ⟩_H = 4 sinh²(d/2) 计算，重合点给出精确的 0
    """
    points = np.asarray(points, dtype=float).reshape(-1, 3)
    if len(points) < 2:
        return np.inf
    diff = points[:, None, :] - points[None, :, :]
    iu = np.triu_indices(len(points), k=1)
    chord2 = np.clip(minkowski_dot(diff, diff)[iu], 0.0, None)
    return float(np.min(2.0 * np.arcsinh(np.sqrt(chord2) / 2.0)))


def _gram(points: np.ndarray) -> np.ndarray:
    """双曲 Gram 矩阵 S[i, j] = ⟨Xᵢ, Xⱼ⟩_H"""
    return points @ METRIC @ points.T


def _interaction_denominators(points: np.ndarray) -> np.ndarray:
    """L[p, r] = ⟨X_p, X_r⟩² − 1，对角线置为 inf"""
    s = _gram(points)
    denom = s * s - 1.0
    np.fill_diagonal(denom, np.inf)
    if np.any(np.abs(denom) < COLLISION_DENOMINATOR):
        raise CollisionError("两个涡旋发生碰撞，速度场发散")
    return denom


def velocity_of(points: np.ndarray, gammas: np.ndarray) -> np.ndarray:
    """velocity 的数组版本"""
    n = len(gammas)
    if n < 2:
        return np.zeros((n, 3))
    denom = _interaction_denominators(points)
    # cross[p, r] = X_p ×_H X_r
    cross = hcross(points[:, None, :], points[None, :, :])
    weights = gammas[:, None] / denom
    return np.einsum("pr,prk->rk", weights, cross) / np.pi


def velocity(config: Configuration) -> np.ndarray:
    """速度场 Ẋᵣ = (1/π) Σ_{p≠r} Γ_p (X̌_p ×_H X̌ᵣ) / (⟨X̌ᵣ, X̌_p⟩²_H − 1)

    Returns:
        np.ndarray: (N, 3)，每一行都与对应点 ⟨·,·⟩_H 正交

    Raises:
        CollisionError: 分母过小
    """
    return velocity_of(config.points, config.gammas)


def hamiltonian_of(points: np.ndarray, gammas: np.ndarray) -> float:
    """hamiltonian 的数组版本，点可以略微偏离 H₂（用于差分）"""
    n = len(gammas)
    if n < 2:
        return 0.0
    c = -_gram(points)
    iu = np.triu_indices(n, k=1)
    c_pairs = c[iu]
    if np.any(c_pairs - 1.0 <= 0.0):
        raise CollisionError("涡旋碰撞，能量为无穷大")
    products = (gammas[:, None] * gammas[None, :])[iu]
    # (s+1)/(s−1) 在 s = −c 时等于 (c−1)/(c+1)
    logs = np.log((c_pairs - 1.0) / (c_pairs + 1.0))
    # 有序对求和 = 2 × 无序对求和
    return float(-2.0 * np.sum(products * logs) / (4.0 * np.pi))


def hamiltonian(config: Configuration) -> float:
    """H = −(1/4π) Σ_{i≠j} ΓᵢΓⱼ ln[(⟨X̌ᵢ,X̌ⱼ⟩_H + 1) / (⟨X̌ᵢ,X̌ⱼ⟩_H − 1)]

    同号涡旋相互靠近时 H → +∞。
    """
    return hamiltonian_of(config.points, config.gammas)


def hamiltonian_gradient_of(points: np.ndarray, gammas: np.ndarray) -> np.ndarray:
    """H 对环境坐标的欧氏梯度 ∇ᵣH = (1/π) Γᵣ Σ_p Γ_p T X_p / L_pr"""
    n = len(gammas)
    if n < 2:
        return np.zeros((n, 3))
    denom = _interaction_denominators(points)
    weighted = (gammas[:, None] / denom).T @ (points @ METRIC)
    return gammas[:, None] * weighted / np.pi


def momentum_of(points: np.ndarray, gammas: np.ndarray) -> np.ndarray:
    return gammas @ points


def momentum(config: Configuration) -> np.ndarray:
    """动量映射 J(X₁, …, X_N) = Σ Γᵢ X̌ᵢ"""
    return momentum_of(config.points, config.gammas)


def _sample(t: float, points: np.ndarray, gammas: np.ndarray, stats: Dict[str, int]) -> TrajectorySample:
    return TrajectorySample(
        t=float(t),
        config=Configuration.trusted(points.copy(), gammas),
        H=hamiltonian_of(points, gammas),
        mu=momentum_of(points, gammas),
        h2_residual=float(np.max(np.abs(minkowski_dot(points, points) + 1.0))),
        step_stats=dict(stats),
    )


def _chart_jacobian(points: np.ndarray) -> np.ndarray:
    """图坐标 z = √(1 + x² + y²) 下的 ∂X/∂(x, y)，形状 (N, 3, 2)"""
    jac = np.zeros((len(points), 3, 2))
    jac[:, 0, 0] = 1.0
    jac[:, 1, 1] = 1.0
    jac[:, 2, :] = points[:, :2] / points[:, 2:3]
    return jac


def project_invariants(points, gammas, mu0, h0, max_iter: int = 4) -> np.ndarray:
    """把点阵投影回 H₂ 上 μ̌ = mu0、H = h0 的等值集

    只修正平面坐标 (x, y)，z 始终由 renormalize 重算。μ̌ 的三个约束用最小范数
    Newton 步修正；H 的修正沿 ∇H 在 μ̌ 约束零空间中的分量进行，该分量相对
    ∇H 过小（接近相对平衡，等值集在此退化）时不修正 H。

    Args:
        points: (N, 3) 点阵
        gammas: 涡量
        mu0: 目标动量
        h0: 目标能量
        max_iter: 最大 Newton 迭代次数

    Returns:
        np.ndarray: 投影后的 (N, 3) 点阵
    """
    pts = renormalize_points(points)
    gammas = np.asarray(gammas, dtype=float)
    n = len(gammas)
    if n < 2:
        return pts
    mu0 = np.asarray(mu0, dtype=float)
    mu_scale = max(1.0, float(np.linalg.norm(mu0)))
    h_scale = max(1.0, abs(float(h0)))

    for _ in range(max_iter):
        r_mu = momentum_of(pts, gammas) - mu0
        r_h = hamiltonian_of(pts, gammas) - h0
        if np.linalg.norm(r_mu) <= PROJECTION_TOL * mu_scale and abs(r_h) <= PROJECTION_TOL * h_scale:
            break
        chart = _chart_jacobian(pts)
        # a[k, 2i + c] = Γᵢ ∂μ̌_k/∂(x, y)ᵢ
        a = (gammas[:, None, None] * chart).transpose(1, 0, 2).reshape(3, 2 * n)
        g = np.einsum("ik,ikc->ic", hamiltonian_gradient_of(pts, gammas), chart).ravel()

        step = -np.linalg.lstsq(a, r_mu, rcond=None)[0]
        g_perp = g - a.T @ np.linalg.lstsq(a.T, g, rcond=None)[0]
        norm2 = float(g_perp @ g_perp)
        if norm2 > (ENERGY_PROJECTION_RATIO * np.linalg.norm(g)) ** 2:
            step -= (r_h + g @ step) / norm2 * g_perp

        moved = pts.copy()
        moved[:, :2] += step.reshape(n, 2)
        pts = renormalize_points(moved)
    return pts


def sample_times(t_end: float, sample_dt: float) -> np.ndarray:
    """采样时刻：sample_dt 的整数倍，末尾补上 t_end"""
    count = int(np.floor(t_end / sample_dt + 1e-9))
    times = [k * sample_dt for k in range(count + 1)]
    if t_end - times[-1] > 1e-12 * max(1.0, t_end):
        times.append(t_end)
    return np.array(times)


def integrate(config: Configuration, t_end: float, icfg: Optional[IntegratorConfig] = None,
              sample_dt: float = 0.1) -> List[TrajectorySample]:
    """用 Dormand–Prince 5(4) 积分速度场

    每个接受步之后把所有点重新投影回 H₂（默认同时投影到初始 H 与 μ̌ 的
    等值集，见 project_invariants），然后在该步内用三次 Hermite 插值输出
    sample_dt 整数倍时刻的采样，插值点同样投影。

    Args:
        config: 初始构型
        t_end: 终止时刻
        icfg: 积分器参数
        sample_dt: 采样间隔

    Returns:
        List[TrajectorySample]: 采样序列，首个为 t = 0

    Raises:
        IntegrationFailure: 步长下溢或涡旋接近碰撞，携带最后一个有效采样
    """
    if t_end <= 0:
        raise ContractViolation("t_end 必须为正")
    if sample_dt <= 0:
        raise ContractViolation("sample_dt 必须为正")
    icfg = icfg or IntegratorConfig()

    gammas = config.gammas
    n = config.n
    evals = [0]
    mu0 = momentum_of(config.points, gammas)
    h0 = hamiltonian_of(config.points, gammas)

    def pull_back(pts: np.ndarray) -> np.ndarray:
        if not icfg.renormalize_each_step:
            return pts
        if icfg.preserve_invariants:
            return project_invariants(pts, gammas, mu0, h0)
        return renormalize_points(pts)

    def rhs(_t, y):
        evals[0] += 1
        return velocity_of(y.reshape(n, 3), gammas).ravel()

    stats = {"accepted": 0, "rejected": 0}
    times = sample_times(t_end, sample_dt)
    samples = [_sample(0.0, config.points, gammas, stats)]
    next_index = 1

    solver = RK45(rhs, 0.0, config.points.ravel().copy(), t_end,
                  max_step=icfg.max_step, rtol=icfg.rel_tol, atol=icfg.abs_tol)
    f_current = rhs(0.0, solver.y)

    while solver.status == "running":
        t_old = solver.t
        y_old = solver.y.copy()
        f_old = f_current
        before = evals[0]
        try:
            message = solver.step()
        except CollisionError as e:
            raise IntegrationFailure(f"积分在 t = {t_old:.6g} 附近失败: {e}",
                                     last_sample=samples[-1], samples=samples,
                                     diagnostic={"t": t_old, "reason": "collision"}) from e
        if solver.status == "failed":
            raise IntegrationFailure(f"积分失败: {message}", last_sample=samples[-1], samples=samples,
                                     diagnostic={"t": t_old, "reason": "step_underflow"})

        attempts = max(1, (evals[0] - before) // _EVALS_PER_ATTEMPT)
        stats["accepted"] += 1
        stats["rejected"] += attempts - 1

        t_new = solver.t
        try:
            points_new = pull_back(solver.y.reshape(n, 3))
            solver.y = points_new.ravel().copy()
            f_current = rhs(t_new, solver.y)
        except CollisionError as e:
            raise IntegrationFailure(f"积分在 t = {t_new:.6g} 附近失败: {e}",
                                     last_sample=samples[-1], samples=samples,
                                     diagnostic={"t": t_new, "reason": "collision"}) from e
        solver.f = f_current

        distance = min_pair_distance(points_new)
        if distance < icfg.collision_distance:
            raise IntegrationFailure(
                f"涡旋接近碰撞（t = {t_new:.6g}, 最小距离 {distance:.3e}）",
                last_sample=samples[-1], samples=samples,
                diagnostic={"t": t_new, "reason": "near_collision", "min_distance": distance})

        if next_index < len(times) and times[next_index] <= t_new + 1e-12:
            spline = CubicHermiteSpline([t_old, t_new], np.vstack([y_old, solver.y]),
                                        np.vstack([f_old, f_current]))
            while next_index < len(times) and times[next_index] <= t_new + 1e-12:
                t_s = min(times[next_index], t_new)
                y_s = solver.y if t_s == t_new else spline(t_s)
                try:
                    pts = y_s.reshape(n, 3) if t_s == t_new else pull_back(y_s.reshape(n, 3))
                except CollisionError as e:
                    raise IntegrationFailure(f"积分在 t = {t_s:.6g} 附近失败: {e}",
                                             last_sample=samples[-1], samples=samples,
                                             diagnostic={"t": t_s, "reason": "collision"}) from e
                samples.append(_sample(times[next_index], pts, gammas, stats))
                next_index += 1

    logger.debug(f"积分完成: 接受 {stats['accepted']} 步, 拒绝 {stats['rejected']} 步")
    return samples


def drift_summary(samples: List[TrajectorySample]) -> Dict[str, float]:
    """守恒量漂移：|ΔH|、‖Δμ̌‖ 与最大双曲面残差"""
    first, last = samples[0], samples[-1]
    return {
        "t_end": last.t,
        "delta_H": float(abs(last.H - first.H)),
        "max_delta_H": float(max(abs(s.H - first.H) for s in samples)),
        "delta_mu": float(np.linalg.norm(last.mu - first.mu)),
        "max_delta_mu": float(max(np.linalg.norm(s.mu - first.mu) for s in samples)),
        "max_h2_residual": float(max(s.h2_residual for s in samples)),
        "accepted_steps": int(last.step_stats.get("accepted", 0)),
        "rejected_steps": int(last.step_stats.get("rejected", 0)),
    }


def evolve_by_flow(config: Configuration, xi, t: float) -> Configuration:
    """沿 ξ 生成的单参数流移动构型：Xᵣ ↦ exp(t·M_ξ)·Xᵣ，M_ξ v = ξ̌ ×_H v"""
    flow = expm(float(t) * cross_matrix(xi))
    return Configuration.trusted(config.points @ flow.T, config.gammas.copy())


def tangent_projection(point, v) -> np.ndarray:
    """把环境向量投影到 T_X H₂：v + ⟨v, X⟩_H X"""
    point = np.asarray(point, dtype=float)
    v = np.asarray(v, dtype=float)
    return v + minkowski_dot(v, point) * point


def kks_form(mu, u, v, tol: float = 1e-9) -> float:
    """KKS 辛形式 ω(μ)(u, v) = μ̌·(u ×_H v) / (2‖μ̌‖²)（欧氏内积与范数）

    Raises:
        ContractViolation: u 或 v 不是 μ 处的切向量
    """
    mu = np.asarray(mu, dtype=float)
    scale = max(1.0, float(np.linalg.norm(mu)))
    for name, w in (("u", u), ("v", v)):
        w_scale = max(1.0, float(np.linalg.norm(w)))
        if abs(minkowski_dot(w, mu)) > tol * scale * w_scale:
            raise ContractViolation(f"{name} 不是 μ 处的切向量")
    return float(np.dot(mu, hcross(u, v)) / (2.0 * np.dot(mu, mu)))


def weighted_kks(config: Configuration, us, vs) -> float:
    """乘积相空间上的加权形式 Σ Γᵢ ω(Xᵢ)(uᵢ, vᵢ)"""
    return float(sum(g * kks_form(x, u, v)
                     for g, x, u, v in zip(config.gammas, config.points, us, vs)))


def random_configuration(rng: np.random.Generator, n: int = 3, radius: float = 1.0,
                         min_distance: float = 0.3, gamma_range=(0.5, 1.5)) -> Configuration:
    """随机构型：平面坐标取自 [−radius, radius]²，两两距离不小于 min_distance"""
    while True:
        xy = rng.uniform(-radius, radius, size=(n, 2))
        points = np.array([lift(x, y) for x, y in xy])
        if n > 1 and min_pair_distance(points) < min_distance:
            continue
        magnitudes = rng.uniform(*gamma_range, size=n)
        signs = np.where(rng.random(n) < 0.3, -1.0, 1.0)
        return Configuration(points, magnitudes * signs)


def calibrate_kks_constant(n_probes: int = 100, rng: Optional[np.random.Generator] = None,
                           step: float = 1e-6, tol: float = 1e-5) -> Dict:
    """确定哈密顿方程的常数 κ：Σ Γᵢ ω(Xᵢ)(Ẋᵢ, vᵢ) = κ·dH(v)

    dH(v) 由中心差分得到；κ 取自 {±½, ±1, ±2}，结果按 (σ, |κ|) 报告。

    Raises:
        CalibrationError: 探针之间结果不一致
    """
    rng = rng or np.random.default_rng(1)
    chosen = None
    max_dev = 0.0
    used = 0
    while used < n_probes:
        config = random_configuration(rng)
        xdot = velocity(config)
        vs = np.array([tangent_projection(x, rng.normal(size=3)) for x in config.points])
        plus = hamiltonian_of(config.points + step * vs, config.gammas)
        minus = hamiltonian_of(config.points - step * vs, config.gammas)
        dh = (plus - minus) / (2.0 * step)
        if abs(dh) < 1e-3:
            continue
        lhs = weighted_kks(config, xdot, vs)
        ratio = lhs / dh
        candidate = min(KKS_CONSTANT_CANDIDATES, key=lambda c: abs(c - ratio))
        deviation = abs(ratio - candidate) / abs(candidate)
        if chosen is None:
            chosen = candidate
        if candidate != chosen or deviation > tol:
            raise CalibrationError(
                f"KKS 常数不一致: 候选 {candidate} / 已选 {chosen}, 偏差 {deviation:.3e}")
        max_dev = max(max_dev, deviation)
        used += 1

    logger.info(f"✅ KKS 常数标定完成: κ = {chosen:+g}（最大偏差 {max_dev:.2e}）")
    return {
        "constant": chosen,
        "sign": int(np.sign(chosen)),
        "magnitude": abs(chosen),
        "max_deviation": max_dev,
        "n_probes": used,
    }


def build_calibration_report(n_probes: int = 100, seed: int = 0) -> Dict:
    """汇总生成元常数 c 与 KKS 常数 κ 的标定结果"""
    rng = np.random.default_rng(seed)
    return {
        "flow_constant": calibrate_flow_constant(n_probes, rng),
        "kks_constant": calibrate_kks_constant(n_probes, rng),
        "n_probes": n_probes,
        "seed": seed,
    }
