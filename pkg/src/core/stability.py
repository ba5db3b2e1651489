#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
稳定性分析模块
负责形式稳定性判定，包括：
- 辛法空间基底 η、ζ 的构造
- 增广哈密顿量的解析 Hessian 及其在法空间上的 2×2 限制
- 定性判定与稳定性决策表
- 两涡旋与等腰测地线族的闭式判据、参数扫描及判据与数值 Hessian 的比对
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import brentq

from .dynamics import Configuration, METRIC, momentum
from .equilibria import (TOL_RE, algebraic_fixed_gamma2, interaction_sums, isosceles_config,
                         re_multipliers, re_shape, zero_momentum_gamma2)
from .errors import (ContractViolation, DegenerateBasisError, DegenerateMomentumError,
                     HypervortexError, InvalidDirectionsError)
from .hypgeo import coplanarity, hcross, lift
from .sl2 import MomentumType, classify_momentum, det_mu as momentum_det

logger = logging.getLogger(__name__)

# Q 的退化带 |det Q| ≤ TOL_Q_REL·‖Q‖²
TOL_Q_REL = 1e-9
# 核维数判定使用的相对奇异值阈值
KERNEL_RCOND = 1e-10
# 判定三点共测地线的阈值
GEODESIC_TOL = 1e-9


class Formal(str, Enum):
    """限制 Hessian 的定性"""

    DEFINITE = "Definite"
    INDEFINITE = "Indefinite"
    DEGENERATE = "Degenerate"


class Modality(str, Enum):
    """形式稳定性推出的稳定性模态"""

    GMU_STABLE = "GmuStable"
    G_STABLE = "GStable"
    LEAFWISE_ONLY = "LeafwiseOnly"
    NOT_FORMALLY_STABLE = "NotFormallyStable"
    ZERO_MOMENTUM_CASE = "ZeroMomentumCase"
    UNDETERMINED = "Undetermined"


# 扫描 CSV 中的判定代码
VERDICT_CODES = {
    Modality.GMU_STABLE: 0,
    Modality.G_STABLE: 1,
    Modality.LEAFWISE_ONLY: 2,
    Modality.NOT_FORMALLY_STABLE: 3,
    Modality.ZERO_MOMENTUM_CASE: 4,
    Modality.UNDETERMINED: 5,
}
INVALID_CODE = 9


@dataclass
class NormalBasis:
    """辛法空间 N₁ 的基底

    Attributes:
        eta: (N, 3)，ηᵢ = aᵢ (D₁ ×_H Xᵢ)
        zeta: (N, 3)，ζᵢ = bᵢ (D₂ ×_H Xᵢ)
        D1, D2: 生成方向
        coeffs_a, coeffs_b: 系数，归一化为 max|·| = 1
    """

    eta: np.ndarray
    zeta: np.ndarray
    D1: np.ndarray
    D2: np.ndarray
    coeffs_a: np.ndarray
    coeffs_b: np.ndarray

    def matrix(self) -> np.ndarray:
        """3N×2 矩阵 B，列为展平的 η、ζ"""
        return np.column_stack([self.eta.ravel(), self.zeta.ravel()])


@dataclass
class StabilityVerdict:
    """稳定性判定结果

    modality 由 (formal, momentum_type) 唯一确定；两涡旋与零动量情形没有
    限制 Hessian，formal 为 None。
    """

    formal: Optional[Formal]
    momentum_type: MomentumType
    modality: Modality
    restricted_hessian: Optional[np.ndarray]
    det_mu: float
    g_stable: bool = False
    definite_sign: int = 0
    xi: Optional[np.ndarray] = None
    notes: List[str] = field(default_factory=list)

    @property
    def det_q(self) -> Optional[float]:
        if self.restricted_hessian is None:
            return None
        return float(np.linalg.det(self.restricted_hessian))

    def to_dict(self) -> Dict:
        return {
            "formal": self.formal.value if self.formal else None,
            "momentum_type": self.momentum_type.value,
            "modality": self.modality.value,
            "g_stable": self.g_stable,
            "restricted_hessian": (self.restricted_hessian.tolist()
                                   if self.restricted_hessian is not None else None),
            "det_q": self.det_q,
            "definite_sign": self.definite_sign,
            "det_mu": float(self.det_mu),
            "xi": self.xi.tolist() if self.xi is not None else None,
            "notes": list(self.notes),
        }


def _is_geodesic(points: np.ndarray) -> bool:
    scale = max(1.0, float(np.prod(np.linalg.norm(points, axis=1))))
    return abs(coplanarity(points[0], points[1], points[2])) <= GEODESIC_TOL * scale


def default_directions(config: Configuration) -> Tuple[np.ndarray, np.ndarray]:
    """默认生成方向

    一般构型取 D₁ = X̌₁ + X̌₂，D₂ = X̌₂ + X̌₃；共测地线时这两者都落在测地线平面内，
    改取 D₁ = X̌₁ + X̌₂ + n̂，D₂ = n̂，n̂ 为 X̌₁ ×_H X̌₃ 的单位化。
    """
    p = config.points
    if _is_geodesic(p):
        normal = hcross(p[0], p[2])
        normal = normal / np.linalg.norm(normal)
        return p[0] + p[1] + normal, normal
    return p[0] + p[1], p[1] + p[2]


def _kernel_coefficients(config: Configuration, direction: np.ndarray) -> np.ndarray:
    """Σᵢ Γᵢ aᵢ (D ×_H X̌ᵢ) = 0 的一维核，归一化为 max|aᵢ| = 1"""
    columns = np.column_stack([g * hcross(direction, x)
                               for g, x in zip(config.gammas, config.points)])
    kernel = null_space(columns, rcond=KERNEL_RCOND)
    if kernel.shape[1] != 1:
        raise DegenerateBasisError(f"核维数为 {kernel.shape[1]}，需要为 1")
    coeffs = kernel[:, 0]
    return coeffs / coeffs[np.argmax(np.abs(coeffs))]


def symplectic_normal_basis(config: Configuration, D1=None, D2=None) -> NormalBasis:
    """构造辛法空间基底 η = (a₁D₁ ×_H X₁, …)，ζ = (b₁D₂ ×_H X₁, …)

    Args:
        config: 三涡旋构型，μ ≠ 0
        D1, D2: 生成方向，缺省时见 default_directions

    Returns:
        NormalBasis: 满足动量切条件的基底

    Raises:
        DegenerateBasisError: D₁ ∥ D₂、核维数不为 1 或 η、ζ 线性相关
        InvalidDirectionsError: 某个涡旋落在 span(D₁, D₂) 内
        DegenerateMomentumError: μ = 0
    """
    if config.n != 3:
        raise ContractViolation("辛法空间基底只对三涡旋构造")
    if classify_momentum(momentum(config)).type == MomentumType.ZERO:
        raise DegenerateMomentumError("μ = 0 时没有辛法空间")

    if D1 is None or D2 is None:
        default1, default2 = default_directions(config)
        D1 = default1 if D1 is None else D1
        D2 = default2 if D2 is None else D2
    D1 = np.asarray(D1, dtype=float)
    D2 = np.asarray(D2, dtype=float)

    span_normal = np.cross(D1, D2)
    if np.linalg.norm(span_normal) <= 1e-12 * np.linalg.norm(D1) * np.linalg.norm(D2):
        raise DegenerateBasisError("D₁ 与 D₂ 平行")
    span_normal = span_normal / np.linalg.norm(span_normal)
    for i, x in enumerate(config.points):
        if abs(np.dot(span_normal, x)) <= 1e-10 * np.linalg.norm(x):
            raise InvalidDirectionsError(f"第 {i + 1} 个涡旋位于 span(D₁, D₂) 内")

    a = _kernel_coefficients(config, D1)
    b = _kernel_coefficients(config, D2)
    eta = a[:, None] * hcross(D1, config.points)
    zeta = b[:, None] * hcross(D2, config.points)

    singular = np.linalg.svd(np.column_stack([eta.ravel(), zeta.ravel()]), compute_uv=False)
    if singular[-1] <= KERNEL_RCOND * singular[0]:
        raise DegenerateBasisError("η 与 ζ 线性相关")

    return NormalBasis(eta=eta, zeta=zeta, D1=D1, D2=D2, coeffs_a=a, coeffs_b=b)


def augmented_gradient(config: Configuration, xi, lambdas) -> np.ndarray:
    """增广函数 F = ½H − ⟨ξ, J⟩_H + ½ Σ λᵣ(⟨Xᵣ, Xᵣ⟩_H + 1) 的欧氏梯度

    ∇ᵣF = T[Γᵣ bᵣ − Γᵣ ξ + λᵣ Xᵣ]，bᵣ 见 interaction_sums。在相对平衡处为零。
    """
    points, gammas = config.points, config.gammas
    xi = np.asarray(xi, dtype=float)
    lambdas = np.asarray(lambdas, dtype=float)
    inner = (gammas[:, None] * interaction_sums(points, gammas)
             - gammas[:, None] * xi[None, :] + lambdas[:, None] * points)
    return inner @ METRIC


def augmented_hessian(config: Configuration, xi, lambdas) -> np.ndarray:
    """增广函数在环境坐标下的解析 Hessian（3N×3N，对称）

    对角块  λᵣT − (Γᵣ/π) Σ_p Γ_p (s_pr / L²_pr)(T X_p)(T X_p)ᵀ
    非对角块 (ΓᵣΓ_q / 2π)[T / L − (2s / L²)(T X_q)(T Xᵣ)ᵀ]，s = ⟨X_q, Xᵣ⟩_H

    ξ 只出现在线性项中，不影响 Hessian。
    """
    points, gammas = config.points, config.gammas
    lambdas = np.asarray(lambdas, dtype=float)
    n = config.n
    t_points = points @ METRIC
    s = points @ METRIC @ points.T
    denom = s * s - 1.0

    hess = np.zeros((3 * n, 3 * n))
    for r in range(n):
        block = lambdas[r] * METRIC
        for p in range(n):
            if p == r:
                continue
            block = block - (gammas[r] / np.pi) * gammas[p] * (s[p, r] / denom[p, r] ** 2) \
                * np.outer(t_points[p], t_points[p])
        hess[3 * r:3 * r + 3, 3 * r:3 * r + 3] = block
        for q in range(n):
            if q == r:
                continue
            coupling = gammas[r] * gammas[q] / (2.0 * np.pi)
            hess[3 * r:3 * r + 3, 3 * q:3 * q + 3] = coupling * (
                METRIC / denom[q, r]
                - (2.0 * s[q, r] / denom[q, r] ** 2) * np.outer(t_points[q], t_points[r]))
    return 0.5 * (hess + hess.T)


def _require_re(config: Configuration, tol_re: float):
    report = re_multipliers(config)
    if report.residual > tol_re:
        raise ContractViolation(f"构型不是相对平衡（残差 {report.residual:.3e} > {tol_re:g}）")
    return report


def restricted_hessian(config: Configuration, D1=None, D2=None,
                       tol_re: float = TOL_RE) -> np.ndarray:
    """Q = Bᵀ·Hess(F)·B，B 的列为辛法空间基底 η、ζ

    Raises:
        ContractViolation: 不是相对平衡
    """
    report = _require_re(config, tol_re)
    basis = symplectic_normal_basis(config, D1, D2)
    b = basis.matrix()
    q = b.T @ augmented_hessian(config, report.xi, report.lambdas) @ b
    return 0.5 * (q + q.T)


def definiteness(q, tol: Optional[float] = None, tol_rel: float = TOL_Q_REL) -> Formal:
    """2×2 对称矩阵的定性

    det Q > tol 为定（正定或负定均可），det Q < −tol 为不定，其余为退化。
    tol 缺省为 tol_rel·‖Q‖²。
    """
    q = np.asarray(q, dtype=float)
    if tol is None:
        tol = tol_rel * float(np.max(np.abs(q))) ** 2
    det = float(q[0, 0] * q[1, 1] - q[0, 1] * q[1, 0])
    if det > tol:
        return Formal.DEFINITE
    if det < -tol:
        return Formal.INDEFINITE
    return Formal.DEGENERATE


def _modality_for(formal: Formal, momentum_type: MomentumType) -> Modality:
    if formal == Formal.DEFINITE:
        return Modality.GMU_STABLE if momentum_type == MomentumType.ELLIPTIC else Modality.G_STABLE
    if formal == Formal.INDEFINITE:
        return Modality.NOT_FORMALLY_STABLE
    return Modality.UNDETERMINED


def classify_stability(config: Configuration, tol_re: float = TOL_RE,
                       D1=None, D2=None, tol_q_rel: float = TOL_Q_REL) -> StabilityVerdict:
    """按决策表给出稳定性判定

    N = 2：总是 G 稳定，μ 为椭圆型时还是 G_μ 稳定，否则只是叶向稳定。
    N = 3，μ ≠ 0：定 ∧ 椭圆 → G_μ 稳定；定 ∧ 抛物/双曲 → G 稳定；不定 → 非形式稳定。
    N = 3，μ = 0：零动量情形，ξ 为椭圆型时 G 稳定。

    Raises:
        ContractViolation: N ∉ {2, 3} 或不是相对平衡
    """
    if config.n not in (2, 3):
        raise ContractViolation(f"稳定性判定只支持 2 或 3 个涡旋，得到 {config.n}")
    report = _require_re(config, tol_re)
    mu = momentum(config)
    mclass = classify_momentum(mu)

    if config.n == 2:
        elliptic = mclass.type == MomentumType.ELLIPTIC
        return StabilityVerdict(
            formal=None, momentum_type=mclass.type,
            modality=Modality.GMU_STABLE if elliptic else Modality.LEAFWISE_ONLY,
            restricted_hessian=None, det_mu=mclass.det_mu, g_stable=True, xi=report.xi)

    if mclass.type == MomentumType.ZERO:
        xi_elliptic = momentum_det(report.xi) > 0.0
        notes = ["angular velocity is elliptic" if xi_elliptic else "angular velocity is not elliptic"]
        return StabilityVerdict(
            formal=None, momentum_type=mclass.type, modality=Modality.ZERO_MOMENTUM_CASE,
            restricted_hessian=None, det_mu=mclass.det_mu, g_stable=bool(xi_elliptic),
            xi=report.xi, notes=notes)

    q = restricted_hessian(config, D1, D2, tol_re)
    formal = definiteness(q, tol_rel=tol_q_rel)
    modality = _modality_for(formal, mclass.type)
    notes: List[str] = []
    if formal == Formal.INDEFINITE and re_shape(config) == "equilateral":
        notes.append("SL(2,R)-unstable")
    if formal == Formal.DEGENERATE:
        notes.append("restricted Hessian is degenerate; no verdict")
    return StabilityVerdict(
        formal=formal, momentum_type=mclass.type, modality=modality,
        restricted_hessian=q, det_mu=mclass.det_mu,
        g_stable=modality in (Modality.GMU_STABLE, Modality.G_STABLE),
        definite_sign=int(np.sign(np.trace(q))) if formal == Formal.DEFINITE else 0,
        xi=report.xi, notes=notes)


def two_vortex_det_mu(gamma1: float, gamma2: float, c: float) -> float:
    """相距 c 的两涡旋 det μ = Γ₁² + Γ₂² + 2Γ₁Γ₂ cosh c"""
    return float(gamma1 ** 2 + gamma2 ** 2 + 2.0 * gamma1 * gamma2 * np.cosh(c))


def two_vortex_threshold(gamma1: float, gamma2: float) -> float:
    """异号两涡旋的临界距离 |ln|Γ₁| − ln|Γ₂||；同号时为 inf"""
    if gamma1 * gamma2 > 0:
        return float("inf")
    return float(abs(np.log(abs(gamma1)) - np.log(abs(gamma2))))


def two_vortex_stability(gamma1: float, gamma2: float, c: float) -> StabilityVerdict:
    """两涡旋闭式判据

    同号，或异号且 c < |ln|Γ₁| − ln|Γ₂||：G_μ 稳定；否则只是叶向稳定。两者都是 G 稳定。
    结果与距离为 c 的显式构型的动量分类一致。
    """
    if not c > 0:
        raise ContractViolation(f"距离 c 必须为正，得到 {c}")
    if gamma1 == 0 or gamma2 == 0:
        raise ContractViolation("涡量必须非零")

    stable = c < two_vortex_threshold(gamma1, gamma2)
    config = Configuration(np.array([lift(0.0, 0.0), lift(np.sinh(c), 0.0)]), (gamma1, gamma2))
    mclass = classify_momentum(momentum(config))
    if stable != (mclass.type == MomentumType.ELLIPTIC):
        logger.warning(f"⚠️ 两涡旋闭式判据与动量分类不一致: Γ=({gamma1}, {gamma2}), c={c}")
    return StabilityVerdict(
        formal=None, momentum_type=mclass.type,
        modality=Modality.GMU_STABLE if stable else Modality.LEAFWISE_ONLY,
        restricted_hessian=None, det_mu=two_vortex_det_mu(gamma1, gamma2, c), g_stable=True)


def a_poly(gamma1: float, gamma2: float, a: float) -> float:
    """等腰测地线相对平衡的闭式判据 A(Γ₁, Γ₂, a) = (512·A₁ + A₂)/Γ₁"""
    g1, g2 = float(gamma1), float(gamma2)
    a1 = (g1 ** 2 * a ** 9
          - 2.0 * g1 * a ** 8 * (g1 - g2 / 4.0)
          + a ** 7 * (-1.25 * g1 ** 2 + 2.0 * g1 * g2)
          + 2.0 * a ** 6 * (g1 + g2 / 4.0) * (g1 - g2)
          + (g1 * a ** 5 / 4.0) * (g1 - 8.0 * g2)
          + (g2 * a ** 4 / 16.0) * (8.0 * g2 + g1)
          - (g1 * g2 / 32.0) * (a ** 2 - 0.5))
    a2 = (g1 * a ** 5 + 0.5 * g2 * a ** 4 - 1.25 * g1 * a ** 3
          - 1.375 * g2 * a ** 2 + 0.25 * g1 * a - 0.125 * g2)
    return (512.0 * a1 + a2) / g1


class SweepCell(NamedTuple):
    """扫描网格中的一个单元"""

    a: float
    gamma2: float
    verdict_code: int
    modality: Optional[str]
    formal: Optional[str]
    A_value: float
    det_mu: float
    detQ: Optional[float]
    on_mu_zero_curve: bool


@dataclass
class SweepResult:
    """等腰测地线族扫描结果"""

    gamma1: float
    a_values: np.ndarray
    gamma2_values: np.ndarray
    cells: List[SweepCell]


def _resolve_threads(threads: Optional[int]) -> int:
    """0 或 None 表示按 CPU 核数自动选择"""
    if not threads or threads < 1:
        threads = os.cpu_count() or 1
    return int(threads)


def classify_isosceles_cell(gamma1: float, a: float, gamma2: float,
                            mu_zero_band: float = 0.05, tol_q_rel: float = TOL_Q_REL) -> SweepCell:
    """对一个 (a, Γ₂) 单元构造等腰测地线相对平衡并判定"""
    on_curve = abs(gamma2 - zero_momentum_gamma2(gamma1, a)) <= mu_zero_band * max(1.0, abs(gamma1))
    value = a_poly(gamma1, gamma2, a) if gamma2 != 0 else float("nan")
    if gamma2 == 0:
        return SweepCell(a, gamma2, INVALID_CODE, None, None, value, float("nan"), None, on_curve)
    try:
        verdict = classify_stability(isosceles_config(gamma1, gamma2, a), tol_q_rel=tol_q_rel)
    except HypervortexError as e:
        logger.debug(f"单元 (a={a:g}, Γ₂={gamma2:g}) 判定失败: {e}")
        config = isosceles_config(gamma1, gamma2, a)
        return SweepCell(a, gamma2, INVALID_CODE, None, None, value,
                         momentum_det(momentum(config)), None, on_curve)
    return SweepCell(
        a=a, gamma2=gamma2, verdict_code=VERDICT_CODES[verdict.modality],
        modality=verdict.modality.value,
        formal=verdict.formal.value if verdict.formal else None,
        A_value=value, det_mu=float(verdict.det_mu), detQ=verdict.det_q,
        on_mu_zero_curve=on_curve)


def _grid_shape(resolution: Union[int, Sequence[int]]) -> Tuple[int, int]:
    if isinstance(resolution, (int, np.integer)):
        n_a = n_g = int(resolution)
    else:
        n_a, n_g = (int(r) for r in resolution)
    if n_a < 2 or n_g < 2:
        raise ValueError("扫描分辨率至少为 2")
    return n_a, n_g


def sweep_isosceles(gamma1: float = 1.0, a_range: Tuple[float, float] = (-5.0, -1.05),
                    gamma2_range: Tuple[float, float] = (-5.0, 5.0),
                    resolution: Union[int, Sequence[int]] = 40,
                    threads: Optional[int] = None, mu_zero_band: float = 0.05,
                    tol_q_rel: float = TOL_Q_REL) -> SweepResult:
    """在 (a, Γ₂) 网格上扫描等腰测地线相对平衡（Γ₁ = Γ₃）的稳定性

    判定来自限制 Hessian 与动量类型；A 的值与 det μ、det Q 一并记录。
    单元并行计算，结果按 a 为外层、Γ₂ 为内层的固定顺序组装。
    """
    a_min, a_max = a_range
    if not (a_min < a_max < -1.0):
        raise ValueError(f"a 的范围必须满足 a_min < a_max < −1，得到 {a_range}")
    g_min, g_max = gamma2_range
    if not g_min < g_max:
        raise ValueError(f"Γ₂ 的范围无效: {gamma2_range}")
    n_a, n_g = _grid_shape(resolution)

    a_values = np.linspace(a_min, a_max, n_a)
    g_values = np.linspace(g_min, g_max, n_g)
    tasks = [(float(a), float(g)) for a in a_values for g in g_values]
    workers = _resolve_threads(threads)
    logger.info(f"🔄 开始扫描 {n_a}×{n_g} 网格（{workers} 个线程）")

    cells: List[SweepCell] = []
    step = max(1, len(tasks) // 10)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        cells_iter = pool.map(
            lambda t: classify_isosceles_cell(gamma1, t[0], t[1], mu_zero_band, tol_q_rel), tasks)
        for cell in cells_iter:
            cells.append(cell)
            if len(cells) % step == 0 and len(cells) < len(tasks):
                logger.info(f"🔄 扫描进度 {len(cells)}/{len(tasks)}")

    logger.info(f"✅ 扫描完成: {len(cells)} 个单元")
    return SweepResult(gamma1=gamma1, a_values=a_values, gamma2_values=g_values, cells=cells)


def compare_a_poly_with_hessian(sweep: SweepResult, a_exclusion: float = 1e-6) -> Dict:
    """比较 sign(A) 与限制 Hessian 的定性

    A > 0 对应定，A < 0 对应不定。排除 |A| < a_exclusion、μ = 0 曲线附近、
    Γ₂ = 0 以及退化或无 Hessian 的单元。
    """
    agree = 0
    disagreements = []
    excluded = 0
    for cell in sweep.cells:
        if (cell.formal not in (Formal.DEFINITE.value, Formal.INDEFINITE.value)
                or cell.on_mu_zero_curve or not np.isfinite(cell.A_value)
                or abs(cell.A_value) < a_exclusion):
            excluded += 1
            continue
        predicted = Formal.DEFINITE.value if cell.A_value > 0 else Formal.INDEFINITE.value
        if predicted == cell.formal:
            agree += 1
        else:
            disagreements.append({"a": cell.a, "gamma2": cell.gamma2,
                                  "A_value": cell.A_value, "formal": cell.formal})
    compared = agree + len(disagreements)
    rate = agree / compared if compared else float("nan")
    if disagreements:
        logger.warning(f"⚠️ sign(A) 与 Hessian 判定在 {len(disagreements)} 个单元上不一致"
                       f"（一致率 {rate:.4f}）")
    return {"agree": agree, "disagree": len(disagreements), "excluded": excluded,
            "rate": rate, "disagreements": disagreements}


@dataclass
class EquilibriumInterval:
    """等腰固定平衡曲线上 A 的符号结构

    Attributes:
        a_lo, a_hi: 距 −1.15 最近的两个根；只有一个根时另一端为 None
        roots: 搜索窗口内的全部根（升序）
        negative_intervals: A < 0 的子区间
    """

    a_lo: Optional[float]
    a_hi: Optional[float]
    roots: List[float]
    negative_intervals: List[Tuple[float, float]]

    def to_dict(self) -> Dict:
        return {
            "a_lo": self.a_lo,
            "a_hi": self.a_hi,
            "roots": list(self.roots),
            "negative_intervals": [list(iv) for iv in self.negative_intervals],
        }


def equilibrium_interval(gamma1: float = 1.0, a_min: float = -10.0, a_max: float = -1.0,
                         scan_points: int = 4000, center: float = -1.15) -> EquilibriumInterval:
    """沿代数固定平衡曲线 Γ₂ = Γ₁a/(1 − a) 求 a ↦ A(Γ₁, Γ₂(a), a) 的根

    网格上找符号变化后用 brentq 求根，并给出 A < 0 的子区间。
    """
    if gamma1 == 0:
        raise ContractViolation("Γ₁ 必须非零")

    def f(a: float) -> float:
        return a_poly(gamma1, algebraic_fixed_gamma2(gamma1, a), a)

    grid = np.linspace(a_min, a_max, scan_points)
    values = np.array([f(a) for a in grid])
    roots: List[float] = []
    for i in range(len(grid) - 1):
        if values[i] == 0.0:
            roots.append(float(grid[i]))
        elif values[i] * values[i + 1] < 0.0:
            roots.append(float(brentq(f, grid[i], grid[i + 1], xtol=1e-14, rtol=4 * np.finfo(float).eps)))

    breakpoints = [a_min] + roots + [a_max]
    negative = [(lo, hi) for lo, hi in zip(breakpoints[:-1], breakpoints[1:])
                if hi > lo and f(0.5 * (lo + hi)) < 0.0]

    if len(roots) >= 2:
        nearest = sorted(sorted(roots, key=lambda r: abs(r - center))[:2])
        a_lo, a_hi = nearest
    elif len(roots) == 1:
        r = roots[0]
        left_negative = f(r - 1e-6 * max(1.0, abs(r))) < 0.0
        a_lo, a_hi = (None, r) if left_negative else (r, None)
    else:
        logger.warning("⚠️ 搜索窗口内 A 没有符号变化，区间为空")
        a_lo = a_hi = None

    return EquilibriumInterval(a_lo=a_lo, a_hi=a_hi, roots=roots, negative_intervals=negative)
