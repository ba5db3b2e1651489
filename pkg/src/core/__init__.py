#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
核心模块包
包含双曲平面点涡旋分析工具的核心功能模块：
- hypgeo: 双曲面模型上的几何运算
- sl2: SL(2,R) 群作用、余伴随作用与动量分类
- dynamics: 速度场、哈密顿量、动量映射与积分器
- equilibria: 相对平衡与固定平衡
- stability: 形式稳定性判定与参数扫描
"""

from .errors import HypervortexError
from .hypgeo import coplanarity, hcross, hdistance, lift, minkowski_dot, renormalize
from .sl2 import (MomentumType, algebra_exp, bracket, classify_momentum, coadjoint, hat,
                  mobius_lift, orbit_curve, pairing)
from .dynamics import (Configuration, IntegratorConfig, evolve_by_flow, hamiltonian, integrate,
                       kks_form, momentum, velocity)
from .equilibria import (geodesic_config, geodesic_re_residual, is_fixed_equilibrium,
                         is_relative_equilibrium, isosceles_fixed_gamma2, make_equilateral,
                         re_multipliers, solve_geodesic_gamma, solve_geodesic_geometry)
from .stability import (a_poly, augmented_hessian, classify_stability, definiteness,
                        equilibrium_interval, restricted_hessian, sweep_isosceles,
                        symplectic_normal_basis, two_vortex_stability)
from .config_manager import ConfigManager
from .data_manager import DataManager, Scenario
from .chart_renderer import ChartRenderer
from .report_generator import ReportGenerator
from .app_controller import AppController

__all__ = [
    'HypervortexError',
    'coplanarity', 'hcross', 'hdistance', 'lift', 'minkowski_dot', 'renormalize',
    'MomentumType', 'algebra_exp', 'bracket', 'classify_momentum', 'coadjoint', 'hat',
    'mobius_lift', 'orbit_curve', 'pairing',
    'Configuration', 'IntegratorConfig', 'evolve_by_flow', 'hamiltonian', 'integrate',
    'kks_form', 'momentum', 'velocity',
    'geodesic_config', 'geodesic_re_residual', 'is_fixed_equilibrium', 'is_relative_equilibrium',
    'isosceles_fixed_gamma2', 'make_equilateral', 're_multipliers', 'solve_geodesic_gamma',
    'solve_geodesic_geometry',
    'a_poly', 'augmented_hessian', 'classify_stability', 'definiteness', 'equilibrium_interval',
    'restricted_hessian', 'sweep_isosceles', 'symplectic_normal_basis', 'two_vortex_stability',
    'ConfigManager',
    'DataManager',
    'Scenario',
    'ChartRenderer',
    'ReportGenerator',
    'AppController'
]

__version__ = '1.0.0'
__description__ = '提供双曲面几何、涡旋动力学、相对平衡与稳定性分析等核心功能'
