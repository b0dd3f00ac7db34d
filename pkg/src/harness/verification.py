"""内置验收套件（verify 子命令）：每项检查返回 {"name", "passed", "detail"}"""
import math
import os
import time
from typing import Callable, Dict, List

import numpy as np

from src.core.bipoly import Z1, Z2, sup_norm_bidisk
from src.core.classify import (
    COMPLETE_INTERSECTION,
    MAX_SQUARE_DEGENERATE,
    MAX_SQUARE_GENERIC,
    classify,
)
from src.core.cxgeom import CanonicalFrame, Complex2
from src.core.green import lower_bound_best, upper_bound_two_point
from src.core.ideals import ci_limit_distance, line_polys, line_product, q_generators, vanishing_residual
from src.utils.log import get_logger
from .config import FamilyConfig, GridConfig, SweepConfig
from .reports import report_to_csv
from .rows import SweepReport
from .runner import run_sweep

logger = get_logger(__name__)

SCHEDULE = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5]
REGION_POINTS = [Complex2(0.5, 0.2), Complex2(0.7, 0.4), Complex2(0.3, 0.05)]


def ci_family() -> FamilyConfig:
    """rho = eps/2, delta = eps（m = -2）"""
    return FamilyConfig(kind="powerlaw", rho_coeff={"re": 0.5}, rho_exp=1, delta_coeff={"re": 1.0}, delta_exp=1)


def degenerate_family() -> FamilyConfig:
    """rho = eps/2, delta = sqrt(eps)"""
    return FamilyConfig(kind="powerlaw", rho_coeff={"re": 0.5}, rho_exp=1, delta_coeff={"re": 1.0}, delta_exp=0.5)


def generic_family(schedule=SCHEDULE) -> FamilyConfig:
    """a2 = (eps, 0), a3 = (0, eps)"""
    samples = [
        {"eps": eps, "points": [
            {"c1": {"re": 0.0}, "c2": {"re": 0.0}},
            {"c1": {"re": eps}, "c2": {"re": 0.0}},
            {"c1": {"re": 0.0}, "c2": {"re": eps}},
        ]}
        for eps in schedule
    ]
    return FamilyConfig(kind="table", samples=samples)


def canonical_families() -> Dict[str, FamilyConfig]:
    return {"ci": ci_family(), "degenerate": degenerate_family(), "generic": generic_family()}


def random_frames(count: int, seed: int = 0) -> List[CanonicalFrame]:
    """eps 在 [1e-6, 0.3] 上对数均匀，|rho| <= eps/2，delta 非零"""
    rng = np.random.default_rng(seed)
    frames = []
    for _ in range(count):
        eps = float(10 ** rng.uniform(-6, math.log10(0.3)))
        rho = eps * rng.uniform(0.05, 0.5) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        delta = 10 ** rng.uniform(-3, 0) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        frames.append(CanonicalFrame.from_parameters(eps, complex(rho), complex(delta)))
    return frames


def _result(name: str, passed: bool, **detail) -> Dict:
    return {"name": name, "passed": bool(passed), "detail": detail}


def check_generators(count: int = 1000, seed: int = 0) -> Dict:
    """Q1-Q3 在三点上消没，l_i 在各自的两点上消没"""
    start, worst = time.perf_counter(), 0.0
    for frame in random_frames(count, seed):
        t = frame.frame_triple()
        for q in q_generators(frame).generators:
            worst = max(worst, *vanishing_residual(q, t))
        residual = [vanishing_residual(l, t) for l in line_polys(frame)]
        worst = max(worst, residual[0][0], residual[0][1], residual[1][0], residual[1][2],
                    residual[2][1], residual[2][2])
    elapsed = time.perf_counter() - start
    return _result("generators", worst <= 1e-10, worst_residual=worst, seconds=elapsed, frames=count)


def check_ideal_limit() -> Dict:
    """rho = eps/2, delta = eps：重标度生成元到 {z2 + 2z1², z1³} 的距离单调下降"""
    schedule = [10.0 ** -k for k in range(1, 7)]
    distances = [ci_limit_distance(CanonicalFrame.from_parameters(e, e / 2, e), -2) for e in schedule]
    monotone = all(b < a for a, b in zip(distances, distances[1:]))
    return _result("ideal_limit", monotone and distances[-1] <= 1e-4, distances=distances)


def check_classification() -> Dict:
    expected = {"ci": COMPLETE_INTERSECTION, "degenerate": MAX_SQUARE_DEGENERATE, "generic": MAX_SQUARE_GENERIC}
    found, passed = {}, True
    for name, family in canonical_families().items():
        c = classify(family.to_spec(), SCHEDULE)
        found[name] = {"regime": c.regime, "flags": c.evidence["flags"]}
        passed &= c.regime == expected[name]
        passed &= "contradictory_verdicts" not in c.evidence["flags"]
        if name == "ci":
            found[name]["m"] = [c.m.real, c.m.imag]
            passed &= abs(c.m + 2) <= 1e-6
    return _result("classification", passed, families=found)


_reports: Dict[str, SweepReport] = {}


def clear_sweep_cache() -> None:
    _reports.clear()


def _sweep(family: FamilyConfig, grid_n: int, budget: int, seed: int) -> SweepReport:
    """同一配置（不计 worker 数）只扫描一次"""
    cfg = SweepConfig(family=family, eps_schedule=SCHEDULE, grid=GridConfig(n=grid_n),
                      envelope_budget=budget, seed=seed, workers=min(4, os.cpu_count() or 1))
    key = cfg.model_dump_json(exclude={"workers"})
    if key not in _reports:
        _reports[key] = run_sweep(cfg)
    else:
        logger.info("♻️  复用已有扫描结果")
    return _reports[key]


def check_sandwich(grid_n: int = 5, budget: int = 1, seed: int = 0) -> Dict:
    """所有行 lower <= upper + 1e-9；envelope <= two_point + 1e-9"""
    detail, passed = {}, True
    for name, family in canonical_families().items():
        report = _sweep(family, grid_n, budget, seed)
        rows = [r for r in report.rows if r.evaluated]
        envelope_ok = all(r.upper_envelope <= r.upper_two_point + 1e-9 for r in rows)
        sandwich_ok = all(r.sandwich_ok(1e-9) for r in rows)
        detail[name] = {"rows": len(report.rows), "evaluated": len(rows),
                        "sandwich_ok": sandwich_ok, "envelope_below_two_point": envelope_ok}
        passed &= sandwich_ok and envelope_ok and len(rows) == len(report.rows)
    return _result("sandwich", passed, families=detail)


def check_region_law(eps: float = 1e-4) -> Dict:
    """|z2| <= |z1|² 时双极点公式趋于 2log|z1|"""
    errors = [abs(upper_bound_two_point(z, eps).value - 2 * math.log(abs(z.c1))) for z in REGION_POINTS]
    return _result("region_law", max(errors) <= 1e-3, errors=errors)


def check_lower_limits(eps: float = 1e-4, grid_n: int = 5) -> Dict:
    """退化族：lower_bound_best >= max(2log|z1|, 3/2 log|z2|) - 5e-2；(0.5, 0) 处 Q 证书接近 2log0.5"""
    frame = CanonicalFrame.from_parameters(eps, eps / 2, math.sqrt(eps))
    worst = math.inf
    for z in GridConfig(n=grid_n).points():
        target = max(2 * math.log(abs(z.c1)), 1.5 * math.log(abs(z.c2)))
        worst = min(worst, lower_bound_best(z, frame).value - target)
    axis = lower_bound_best(Complex2(0.5, 0), frame)
    q_error = abs(float(axis.certificate["candidates"]["Q1"]) - 2 * math.log(0.5))
    return _result("lower_limits", worst >= -5e-2 and q_error <= 1e-2, worst_margin=worst, q_error=q_error)


def check_ci_targets(grid_n: int = 5, budget: int = 1, seed: int = 0) -> Dict:
    """m = -2 族：lower <= exact + 0.05 断言；上侧与趋势只报告"""
    report = _sweep(ci_family(), grid_n, budget, seed)
    last = [r for r in report.rows if r.eps_index == len(SCHEDULE) - 1 and r.evaluated]
    lower_ok = all(r.lower <= r.exact_or_reference + 0.05 for r in last)
    upper_fraction = sum(r.upper_envelope >= r.exact_or_reference - 0.05 for r in last) / max(1, len(last))
    summary = report.diagnostics.get("summary", {})
    return _result("ci_targets", lower_ok, upper_fraction=upper_fraction,
                   trend_fraction=summary.get("trend_fraction"), trend_status=summary.get("trend_status"))


def check_supnorm(frames: int = 100, seed: int = 0) -> Dict:
    """|sup(z2 - m z1²) - (1+|m|)| <= 不确定度 + 1e-6；‖P‖ <= (1+|δ|)(1+|δ|(1+|ε|))"""
    oracle = []
    for m in (0, 1, -2, 1j):
        result = sup_norm_bidisk(Z2 - m * Z1 * Z1, 512)
        oracle.append(abs(result.value - (1 + abs(m))) <= result.uncertainty + 1e-6)
    bound_ok = []
    for frame in random_frames(frames, seed):
        d, e = abs(frame.delta), abs(frame.eps)
        bound_ok.append(sup_norm_bidisk(line_product(frame)).value <= (1 + d) * (1 + d * (1 + e)) + 1e-12)
    return _result("supnorm", all(oracle) and all(bound_ok), oracle=oracle, line_product_ok=sum(bound_ok))


def check_determinism(grid_n: int = 2, budget: int = 1, seed: int = 0) -> Dict:
    """相同 seed、不同 worker 数的 CSV 字节一致"""
    texts = []
    for workers in (1, 2):
        cfg = SweepConfig(family=ci_family(), eps_schedule=SCHEDULE,
                          grid=GridConfig(n=grid_n), envelope_budget=budget, seed=seed, workers=workers)
        texts.append(report_to_csv(run_sweep(cfg)))
    return _result("determinism", texts[0] == texts[1], bytes=len(texts[0]))


def run_verification(quick: bool = False, seed: int = 0) -> Dict:
    """依次运行全部检查；quick 时缩小规模"""
    checks: List[Callable[[], Dict]] = [
        lambda: check_generators(100 if quick else 1000, seed),
        check_ideal_limit,
        check_classification,
        lambda: check_sandwich(3 if quick else 5, 1, seed),
        check_region_law,
        check_lower_limits,
        lambda: check_ci_targets(3 if quick else 5, 1, seed),
        lambda: check_supnorm(20 if quick else 100, seed),
        lambda: check_determinism(2, 1, seed),
    ]
    start = time.perf_counter()
    clear_sweep_cache()
    results = []
    for check in checks:
        result = check()
        logger.info("%s %s", "✅" if result["passed"] else "❌", result["name"])
        results.append(result)
    return {
        "passed": all(r["passed"] for r in results),
        "seconds": time.perf_counter() - start,
        "checks": results,
    }
