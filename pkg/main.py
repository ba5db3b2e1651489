#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
双曲平面点涡旋分析工具 - 命令行入口

子命令: simulate, classify, re, stability, sweep, orbit, calibrate, check
退出码: 0 成功, 2 输入错误, 3 积分失败, 4 前置条件不满足
"""

import argparse
import logging
import os
import sys
import traceback
from typing import List, Optional

# 将src目录添加到Python路径
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), 'src'))

logger = logging.getLogger("hypervortex")

DEFAULT_CONFIG = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'config', 'default_settings.json')


def check_environment() -> bool:
    """检查运行环境（结果写到标准错误）"""
    log = logging.getLogger("hypervortex.env")
    if sys.version_info < (3, 10):
        log.error(f"❌ Python版本过低: {sys.version}，需要Python 3.10或更高版本")
        return False
    log.info(f"✅ Python版本: {sys.version.split()[0]}")

    required_packages = ['numpy', 'scipy', 'pandas', 'jinja2']
    optional_packages = ['pyecharts']

    missing_packages = []
    for package in required_packages:
        try:
            __import__(package)
            log.info(f"✅ {package} 已安装")
        except ImportError:
            log.error(f"❌ {package} 未安装")
            missing_packages.append(package)
    for package in optional_packages:
        try:
            __import__(package)
            log.info(f"✅ {package} 已安装")
        except ImportError:
            log.warning(f"⚠️ {package} 未安装，--html 输出不可用")

    if missing_packages:
        log.error(f"请安装缺失的包: pip install {' '.join(missing_packages)}")
        return False
    return True


def _float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError(f"需要逗号分隔的数值，得到 {text!r}")


def build_parser() -> argparse.ArgumentParser:
    """构造命令行解析器"""
    parser = argparse.ArgumentParser(
        prog="hypervortex",
        description="双曲平面（双曲面模型）上 N 个点涡旋的模拟、相对平衡与稳定性分析")
    parser.add_argument("--config", help="配置文件路径（JSON），覆盖默认设置")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="输出调试日志")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="只输出警告和错误")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="相对平衡残差容差")
    common.add_argument("--out", default=None, help="输出 CSV 路径")
    common.add_argument("--seed", type=int, default=0, help="随机种子")
    common.add_argument("--html", default=None, help="额外输出 HTML 图表（需要 pyecharts）")

    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("simulate", parents=[common], help="积分场景并输出轨迹 CSV")
    p.add_argument("scenario", help="场景 JSON 文件")
    p.add_argument("out_csv", nargs="?", help="轨迹 CSV（也可用 --out）")

    p = sub.add_parser("classify", parents=[common], help="动量类型分类")
    p.add_argument("scenario")

    p = sub.add_parser("re", parents=[common], help="相对平衡求解")
    p.add_argument("scenario")

    p = sub.add_parser("stability", parents=[common], help="相对平衡的稳定性判定")
    p.add_argument("scenario")

    p = sub.add_parser("sweep", parents=[common], help="等腰测地线族稳定性扫描")
    p.add_argument("out_csv", nargs="?")
    p.add_argument("--gamma1", type=float, default=None)
    p.add_argument("--a-min", type=float, default=None)
    p.add_argument("--a-max", type=float, default=None)
    p.add_argument("--g2-min", type=float, default=None)
    p.add_argument("--g2-max", type=float, default=None)
    p.add_argument("--resolution", type=int, default=None)
    p.add_argument("--report", default=None, help="Markdown 扫描报告路径")

    p = sub.add_parser("orbit", parents=[common], help="采样轨道曲线 P_μ ∩ H₂")
    p.add_argument("out_csv", nargs="?")
    p.add_argument("--mu", type=_float_list, required=True, help="x,y,z（负数请写成 --mu=-1,0,0）")
    p.add_argument("--nu", type=_float_list, default=[0.0, 0.0], help="起点的平面坐标 x,y")
    p.add_argument("--t-max", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=101)

    p = sub.add_parser("calibrate", parents=[common], help="标定生成元常数与 KKS 常数")
    p.add_argument("--probes", type=int, default=100)
    p.add_argument("--report", default=None, help="Markdown 标定报告路径")

    sub.add_parser("check", help="检查运行环境")
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    """日志统一写到标准错误，标准输出只留给 JSON 结果"""
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr, force=True,
                        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s")


def _require_out(args) -> Optional[str]:
    out = getattr(args, "out_csv", None) or args.out
    if not out:
        logger.error("❌ 缺少输出路径（位置参数或 --out）")
    return out


def main(argv: Optional[List[str]] = None) -> int:
    """主函数

    Args:
        argv: 命令行参数，默认取 sys.argv[1:]

    Returns:
        int: 退出码
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse 的用法错误统一按输入错误处理
        return 0 if e.code == 0 else 2

    configure_logging(args.verbose, args.quiet)

    if args.command is None:
        parser.print_help(sys.stderr)
        return 2
    if args.command == "check":
        return 0 if check_environment() else 1

    from core.app_controller import AppController
    from core.config_manager import ConfigManager

    config_manager = ConfigManager()
    config_file = args.config or (DEFAULT_CONFIG if os.path.exists(DEFAULT_CONFIG) else None)
    if config_file and not config_manager.load_config_file(config_file):
        return 2
    html = args.html
    controller = AppController(config_manager)

    if args.command == "simulate":
        out = _require_out(args)
        return controller.cmd_simulate(args.scenario, out, html=html) if out else 2
    if args.command == "classify":
        return controller.cmd_classify(args.scenario)
    if args.command == "re":
        return controller.cmd_re(args.scenario, tol=args.tol)
    if args.command == "stability":
        return controller.cmd_stability(args.scenario, tol=args.tol)
    if args.command == "sweep":
        out = _require_out(args)
        if not out:
            return 2
        return controller.cmd_sweep(out, gamma1=args.gamma1, a_min=args.a_min, a_max=args.a_max,
                                    g2_min=args.g2_min, g2_max=args.g2_max,
                                    resolution=args.resolution, html=html, report=args.report)
    if args.command == "orbit":
        out = _require_out(args)
        if not out:
            return 2
        return controller.cmd_orbit(args.mu, args.nu, args.t_max, args.samples, out, html=html)
    if args.command == "calibrate":
        return controller.cmd_calibrate(n_probes=args.probes, seed=args.seed, report=args.report)

    parser.print_help(sys.stderr)
    return 2


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\n👋 程序被用户中断，正在退出...", file=sys.stderr)
        sys.exit(0)
    except Exception as e:
        print(f"\n💥 程序出现未处理的错误: {e}", file=sys.stderr)
        traceback.print_exc()
        sys.exit(1)
