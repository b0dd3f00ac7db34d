"""主入口文件：plurigreen 命令行

数据（JSON）只写到 stdout 或输出文件，提示信息写到 stderr。
退出码：0 成功，2 配置错误，3 数值失败，4 验收失败。
"""
import argparse
import logging
import math
import os
import sys
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

# 加载环境变量
load_dotenv()

from pydantic import ValidationError

from config import CLI_CONFIG
from src.core.cxgeom import Complex2
from src.core.errors import ConfigurationError
from src.harness.config import CliConfig
from src.harness.reports import write_atomic
from src.tools import (
    classify_family,
    describe_generators,
    evaluate_bounds,
    get_run,
    list_runs,
    load_config_file,
    sweep_to_files,
    verify_suite,
)
from src.utils.log import configure, get_logger
from src.utils.serialization import dumps_json

logger = get_logger("src.cli")


def _complex_arg(text: str) -> complex:
    """'0.5'、'0.5+0.1j' 或 're,im'"""
    try:
        if "," in text:
            re, im = (float(x) for x in text.split(","))
            return complex(re, im)
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"无法解析复数：{text}") from exc


def _point_arg(text: str) -> Complex2:
    """'z1_re,z1_im,z2_re,z2_im'"""
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"无法解析点：{text}") from exc
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("--z 需要 4 个数：z1_re,z1_im,z2_re,z2_im")
    if not all(math.isfinite(x) for x in parts):
        raise argparse.ArgumentTypeError(f"坐标必须有限：{text}")
    return Complex2(complex(parts[0], parts[1]), complex(parts[2], parts[3]))


def _schedule_arg(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"无法解析 eps 序列：{text}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help=f"随机种子（默认读取 {CLI_CONFIG['seed_env']}，否则 0）")
    common.add_argument("--config", dest="config_path", default=None, help="JSON 配置文件")
    common.add_argument("--output", default=None, help="输出路径（sweep 时为文件名前缀）")
    common.add_argument("--verbose", action="store_true", help="输出调试日志")

    family = argparse.ArgumentParser(add_help=False)
    family.add_argument("--family", choices=["powerlaw", "table"], default=None)
    family.add_argument("--rho-coeff", type=_complex_arg, default=None)
    family.add_argument("--rho-exp", type=float, default=None)
    family.add_argument("--delta-coeff", type=_complex_arg, default=None)
    family.add_argument("--delta-exp", type=float, default=None)
    family.add_argument("--schedule", type=_schedule_arg, default=None, help="逗号分隔的 eps 序列（严格递减）")

    frame = argparse.ArgumentParser(add_help=False)
    frame.add_argument("--eps", type=float, required=True)
    frame.add_argument("--rho", type=_complex_arg, required=True)
    frame.add_argument("--delta", type=_complex_arg, required=True)

    numeric = argparse.ArgumentParser(add_help=False)
    numeric.add_argument("--budget", type=int, default=None, help="圆盘包络的随机重启次数")
    numeric.add_argument("--resolution", type=int, default=None, help="上确界范数的网格分辨率")

    parser = argparse.ArgumentParser(prog="plurigreen", description="双圆盘中三点的多复 Green 函数极限")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("classify", parents=[common, family], help="判定族的极限情形")
    sub.add_parser("generators", parents=[common, frame], help="打印一个标架的理想生成元")
    bounds = sub.add_parser("bounds", parents=[common, frame, numeric], help="计算一个点上的上下界")
    bounds.add_argument("--z", type=_point_arg, required=True, help="z1_re,z1_im,z2_re,z2_im")
    sweep = sub.add_parser("sweep", parents=[common, family, numeric], help="扫描并写出 CSV + JSON")
    sweep.add_argument("--workers", type=int, default=None)
    sweep.add_argument("--grid", type=int, default=None, help="[0.2, 0.8]² 上 n×n 网格")
    sweep.add_argument("--csv", default=None)
    sweep.add_argument("--json", default=None)
    sweep.add_argument("--db", dest="db_url", default=None, help="归档数据库（URL 或 SQLite 文件路径）")
    verify = sub.add_parser("verify", parents=[common], help="运行内置验收套件")
    verify.add_argument("--quick", action="store_true")
    runs = sub.add_parser("runs", parents=[common], help="查看归档的扫描")
    runs.add_argument("--id", type=int, default=None)
    runs.add_argument("--limit", type=int, default=20)
    runs.add_argument("--db", dest="db_url", default=None)
    return parser


def _env_int(name: str) -> Optional[int]:
    value = os.getenv(name)
    if value in (None, ""):
        return None
    try:
        return int(value)
    except ValueError as exc:
        raise ConfigurationError(f"环境变量 {name} 不是整数：{value}") from exc


def resolve_seed(flag: Optional[int], file_value: Any = None) -> Any:
    """命令行 > 环境变量 > 配置文件 > 0"""
    if flag is not None:
        return flag
    env = _env_int(CLI_CONFIG["seed_env"])
    if env is not None:
        return env
    return 0 if file_value is None else file_value


def _db_url(flag: Optional[str]) -> Optional[str]:
    url = flag or os.getenv(CLI_CONFIG["db_url_env"]) or None
    if url and "://" not in url:
        url = f"sqlite:///{url}"
    return url


def _family_config(args: argparse.Namespace, file_config: Dict[str, Any]) -> Dict[str, Any]:
    """配置文件中的 family，再用命令行参数覆盖"""
    family = dict(file_config.get("family", {}))
    if args.family is not None:
        family["kind"] = args.family
    for key in ("rho_coeff", "delta_coeff"):
        value = getattr(args, key)
        if value is not None:
            family[key] = {"re": value.real, "im": value.imag}
    for key in ("rho_exp", "delta_exp"):
        value = getattr(args, key)
        if value is not None:
            family[key] = value
    return family


def _emit(result: Dict[str, Any], output: Optional[str] = None) -> int:
    if result["status"] == "success":
        logger.info("✅ %s", result["message"])
    else:
        logger.error("❌ %s", result["message"])
    if result.get("data") is not None:
        text = dumps_json(result["data"]) + "\n"
        if output:
            write_atomic(output, text)
        else:
            sys.stdout.write(text)
    return result["code"]


def _dispatch(args: argparse.Namespace) -> int:
    cli = CliConfig(
        subcommand=args.subcommand,
        seed=args.seed,
        workers=getattr(args, "workers", None),
        budget=getattr(args, "budget", None),
        resolution=getattr(args, "resolution", None),
        config_path=args.config_path,
        output=args.output,
        db_url=getattr(args, "db_url", None),
    )
    file_config = load_config_file(cli.config_path) if cli.config_path else {}

    if cli.subcommand == "classify":
        schedule = args.schedule if args.schedule is not None else file_config.get("eps_schedule")
        return _emit(classify_family(_family_config(args, file_config), schedule), cli.output)

    if cli.subcommand == "generators":
        return _emit(describe_generators(args.eps, args.rho, args.delta), cli.output)

    if cli.subcommand == "bounds":
        seed = resolve_seed(cli.seed, file_config.get("seed"))
        result = evaluate_bounds(args.eps, args.rho, args.delta, args.z,
                                 budget=cli.budget, seed=seed, resolution=cli.resolution)
        return _emit(result, cli.output)

    if cli.subcommand == "sweep":
        config = dict(file_config)
        config["family"] = _family_config(args, file_config)
        if args.schedule is not None:
            config["eps_schedule"] = args.schedule
        if args.grid is not None:
            config["grid"] = {"n": args.grid}
        elif not config.get("test_points") and config.get("grid") is None:
            config["grid"] = {}
        config["seed"] = resolve_seed(cli.seed, file_config.get("seed"))
        workers = cli.workers if cli.workers is not None else _env_int(CLI_CONFIG["workers_env"])
        if workers is not None:
            config["workers"] = workers
        config.update({k: v for k, v in cli.sweep_overrides().items() if k not in ("seed", "workers")})
        prefix = cli.output or "sweep"
        csv_path = args.csv or f"{prefix}.csv"
        json_path = args.json or f"{prefix}.json"
        return _emit(sweep_to_files(config, csv_path, json_path, _db_url(cli.db_url)))

    if cli.subcommand == "verify":
        seed = resolve_seed(cli.seed)
        return _emit(verify_suite(quick=args.quick, seed=seed), cli.output)

    # runs
    url = _db_url(cli.db_url)
    result = get_run(args.id, url) if args.id is not None else list_runs(url, args.limit)
    return _emit(result, cli.output)


def parse_and_dispatch(argv: Optional[List[str]] = None) -> int:
    """解析参数并执行子命令，返回退出码"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (None, 0) else 2
    configure(logging.DEBUG if args.verbose else logging.INFO)
    try:
        return _dispatch(args)
    except (ValidationError, ConfigurationError) as exc:
        logger.error("❌ 配置错误：%s", exc)
        return 2


def main():
    """主函数"""
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()
