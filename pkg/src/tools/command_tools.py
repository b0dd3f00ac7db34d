"""命令工具：包装核心计算，统一返回 {"status", "code", "message", "data"}"""
import json
import os
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from src.core.bipoly import sup_norm_bidisk
from src.core.classify import classify
from src.core.cxgeom import CanonicalFrame, Complex2
from src.core.errors import ConfigurationError, PluriGreenError
from src.core.green import lower_bound_best, upper_bound_disk_envelope, upper_bound_two_point
from src.core.ideals import (
    ci_limit_distance,
    limit_ideal_ci,
    line_polys,
    line_product,
    maximal_square,
    monomial_limit_combinations,
    q_generators,
)
from src.harness.config import FamilyConfig, FrameConfig, SweepConfig
from src.harness.reports import write_report
from src.harness.runner import run_sweep
from src.harness.verification import run_verification
from src.utils.log import get_logger
from src.utils.serialization import complex_to_record, float_to_json, to_jsonable
from .archive_tools import archive_report

logger = get_logger(__name__)

VERIFICATION_FAILED = 4


def _success(message: str, data: Any) -> Dict[str, Any]:
    return {"status": "success", "code": 0, "message": message, "data": to_jsonable(data)}


def _error(exc: Exception) -> Dict[str, Any]:
    """异常 -> 退出码：配置 2，数值 3"""
    if isinstance(exc, (ValidationError, ConfigurationError)):
        code = 2
    elif isinstance(exc, PluriGreenError):
        code = exc.exit_code
    else:
        code = 3
    return {"status": "error", "code": code, "message": f"{type(exc).__name__}: {exc}", "data": None}


def load_config_file(path: str) -> Dict[str, Any]:
    """读取 JSON 配置文件；文件缺失或格式错误都算配置错误"""
    if not os.path.exists(path):
        raise ConfigurationError(f"配置文件不存在：{path}")
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"无法解析配置文件 {path}：{exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError("配置文件顶层必须是对象")
    return data


def frame_record(frame: CanonicalFrame) -> Dict[str, Any]:
    try:
        m = complex_to_record(frame.m)
    except PluriGreenError:
        m = None
    return {
        "eps": frame.eps,
        "rho": complex_to_record(frame.rho),
        "delta": complex_to_record(frame.delta),
        "m": m,
        "rho_within_half_eps": frame.rho_within_half_eps(),
    }


def classify_family(family: Dict[str, Any], eps_schedule: Optional[List[float]] = None) -> Dict[str, Any]:
    """对一个族做情形判定"""
    try:
        cfg = SweepConfig(family=FamilyConfig(**family), eps_schedule=eps_schedule)
        result = classify(cfg.family.to_spec(), cfg.schedule())
        logger.info("✅ 判定结果：%s", result.regime)
        return _success(f"判定结果：{result.regime}", result.to_record())
    except Exception as exc:
        return _error(exc)


def describe_generators(eps: float, rho: complex, delta: complex) -> Dict[str, Any]:
    """单个标架的 Q 生成元、三条直线、P 以及极限理想"""
    try:
        frame = FrameConfig(
            eps=eps,
            rho={"re": complex(rho).real, "im": complex(rho).imag},
            delta={"re": complex(delta).real, "im": complex(delta).imag},
        ).to_frame()
        triple = q_generators(frame)
        lines = line_polys(frame)
        product = line_product(frame)
        data = {
            "frame": frame_record(frame),
            "triple_ideal": triple.to_record(),
            "triple_ideal_standard": triple.to_standard(frame).to_record(),
            "lines": [{"name": f"l{i + 1}", "terms": l.to_records()} for i, l in enumerate(lines)],
            "line_product": {
                "terms": product.to_records(),
                "sup_norm": sup_norm_bidisk(product).to_record(),
            },
            "limit_ideal": limit_ideal_ci(frame.m).to_record(),
            "limit_distance": ci_limit_distance(frame, frame.m),
            "maximal_square": maximal_square().to_record(),
            "monomial_limits": monomial_limit_combinations(frame).to_record(),
        }
        return _success("生成元计算完成", data)
    except Exception as exc:
        return _error(exc)


def evaluate_bounds(eps: float, rho: complex, delta: complex, z: Complex2,
                    budget: Optional[int] = None, seed: int = 0,
                    resolution: Optional[int] = None) -> Dict[str, Any]:
    """一个 (z, 标架) 上的下界、双极点上界与圆盘包络"""
    try:
        frame = FrameConfig(
            eps=eps,
            rho={"re": complex(rho).real, "im": complex(rho).imag},
            delta={"re": complex(delta).real, "im": complex(delta).imag},
        ).to_frame()
        lower = lower_bound_best(z, frame, resolution)
        two = upper_bound_two_point(z, frame.eps)
        envelope = upper_bound_disk_envelope(z, frame, budget, seed, lower=lower)
        gap = envelope.value - lower.value if lower.value > float("-inf") else float("inf")
        data = {
            "frame": frame_record(frame),
            "z": {"c1": complex_to_record(z.c1), "c2": complex_to_record(z.c2)},
            "bounds": {
                "lower": lower.to_record(),
                "upper_two_point": two.to_record(),
                "upper_envelope": envelope.to_record(),
            },
            "gap": float_to_json(gap),
            "sandwich_ok": lower.value <= min(two.value, envelope.value) + 1e-9,
        }
        return _success("界计算完成", data)
    except Exception as exc:
        return _error(exc)


def sweep_to_files(config: Dict[str, Any], csv_path: str, json_path: str,
                   db_url: Optional[str] = None) -> Dict[str, Any]:
    """校验配置、执行扫描、原子写出 CSV 与 JSON；给定 db_url 时归档"""
    try:
        cfg = SweepConfig(**config)
    except Exception as exc:
        return _error(exc)
    try:
        report = run_sweep(cfg)
        write_report(report, csv_path, json_path)
    except Exception as exc:
        return _error(exc)
    logger.info("✅ 已写出 %s 与 %s（%d 行）", csv_path, json_path, len(report.rows))

    data = {
        "csv": csv_path,
        "json": json_path,
        "rows": len(report.rows),
        "regime": report.classification.regime,
        "summary": report.diagnostics.get("summary"),
    }
    if db_url:
        archived = archive_report(report, db_url, workers=cfg.workers)
        if archived["status"] != "success":
            return archived
        data["run_id"] = archived["data"]["id"]
    return _success(f"扫描完成：{len(report.rows)} 行", data)


def verify_suite(quick: bool = False, seed: int = 0) -> Dict[str, Any]:
    """内置验收套件；任一检查失败返回退出码 4"""
    try:
        result = run_verification(quick=quick, seed=seed)
    except Exception as exc:
        return _error(exc)
    failed = [c["name"] for c in result["checks"] if not c["passed"]]
    if failed:
        return {
            "status": "error",
            "code": VERIFICATION_FAILED,
            "message": f"验收失败：{', '.join(failed)}",
            "data": to_jsonable(result),
        }
    return _success(f"全部 {len(result['checks'])} 项检查通过", result)
