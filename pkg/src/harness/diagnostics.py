"""收敛诊断：把扫描结果与理论目标逐点比较

- liminf：最小 eps 的下界 >= max(2log|z1|, 3/2 log|z2|) - band（退化 𝔐₀² 族）
- 情形目标：完全交族看 |envelope - exact| 的趋势与两侧带宽；
  退化族在 log|delta|/log|eps| -> 0 时看 envelope <= 3/2 log max(|z1|,|z2|) + band
- 区域 |z2| <= |z1|²：|two_point - 2log|z1|| <= formula_band

上侧带宽与趋势只报告不计入 passed：闭式极限在双圆盘上可以高于任何已证上界。
"""
import math
from typing import Dict, List, Optional

from src.core.classify import COMPLETE_INTERSECTION, MAX_SQUARE_DEGENERATE
from src.core.errors import InsufficientDataError
from src.utils.serialization import float_to_json
from .config import Tolerances
from .rows import SweepReport, SweepRow


def _log(x: float) -> float:
    return -math.inf if x == 0 else math.log(x)


def _liminf_target(z) -> float:
    return max(2.0 * _log(abs(z.c1)), 1.5 * _log(abs(z.c2)))


def _non_increasing(values: List[float]) -> bool:
    return all(b <= a + 1e-12 for a, b in zip(values, values[1:]))


def _point_diagnostics(rows: List[SweepRow], regime: str, deltabig: bool, tol: Tolerances) -> Dict:
    z = rows[0].z
    evaluated = [r for r in rows if r.evaluated]
    record: Dict = {
        "point_index": rows[0].point_index,
        "z": [z.c1.real, z.c1.imag, z.c2.real, z.c2.imag],
        "evaluated_rows": len(evaluated),
    }
    last: Optional[SweepRow] = rows[-1] if rows[-1].evaluated else None
    if last is None:
        record["skipped"] = "smallest-eps row not evaluated"
        return record

    target = _liminf_target(z)
    record["liminf"] = {
        "applicable": regime == MAX_SQUARE_DEGENERATE,
        "target": float_to_json(target),
        "lower": float_to_json(last.lower),
        "passed": last.lower >= target - tol.liminf_band,
    }

    if regime == COMPLETE_INTERSECTION:
        exact = last.exact_or_reference
        tail = [abs(r.upper_envelope - r.exact_or_reference) for r in evaluated[-3:]]
        record["target"] = {
            "kind": "exact_limit",
            "exact": float_to_json(exact),
            "lower_within_band": last.lower <= exact + tol.envelope_band,
            "upper_within_band": last.upper_envelope >= exact - tol.envelope_band,
            "residual_gap": float_to_json(last.upper_envelope - exact),
        }
        record["trend"] = {
            "gaps": [float_to_json(g) for g in tail],
            "non_increasing": len(tail) == 3 and _non_increasing(tail),
        }
    elif regime == MAX_SQUARE_DEGENERATE:
        reference = 1.5 * _log(max(abs(z.c1), abs(z.c2)))
        record["target"] = {
            "kind": "deltabig_reference",
            "applicable": deltabig,
            "reference": float_to_json(reference),
            "upper_envelope": float_to_json(last.upper_envelope),
            "passed": last.upper_envelope <= reference + tol.envelope_band,
        }

    in_region = abs(z.c2) <= abs(z.c1) ** 2
    formula = 2.0 * _log(abs(z.c1))
    record["region"] = {
        "applicable": in_region,
        "target": float_to_json(formula),
        "upper_two_point": float_to_json(last.upper_two_point),
        "passed": (not in_region) or abs(last.upper_two_point - formula) <= tol.formula_band,
    }
    return record


def convergence_diagnostics(report: SweepReport, tolerances: Optional[Tolerances] = None) -> Dict:
    """逐点诊断与汇总；每个点至少需要 4 个 eps 行"""
    tol = tolerances or Tolerances()
    groups = report.point_rows()
    for index, rows in groups.items():
        if len({r.eps_index for r in rows}) < 4:
            raise InsufficientDataError(f"点 {index} 只有 {len(rows)} 个 eps 行，至少需要 4 个")

    regime = report.classification.regime
    deltabig = bool(report.classification.evidence.get("verdicts", {}).get("deltabig_hypothesis", False))
    points = [_point_diagnostics(rows, regime, deltabig, tol) for _, rows in sorted(groups.items())]

    violations = [r for r in report.rows if not r.sandwich_ok(tol.sandwich)]
    checked = [p for p in points if "skipped" not in p]
    liminf = [p["liminf"]["passed"] for p in checked if p["liminf"]["applicable"]]
    region = [p["region"]["passed"] for p in checked if p["region"]["applicable"]]
    lower_side, upper_side, degenerate_target = [], [], []
    for p in checked:
        target = p.get("target", {})
        if target.get("kind") == "exact_limit":
            lower_side.append(target["lower_within_band"])
            upper_side.append(target["upper_within_band"])
        elif target.get("kind") == "deltabig_reference" and target["applicable"]:
            degenerate_target.append(target["passed"])

    trends = [p["trend"]["non_increasing"] for p in checked if "trend" in p]
    if trends:
        fraction = sum(trends) / len(trends)
        if fraction >= tol.trend_soft:
            trend_status = "pass"
        elif fraction >= tol.trend_hard:
            trend_status = "soft"
        else:
            trend_status = "fail"
    else:
        fraction, trend_status = None, "n/a"

    summary = {
        "sandwich_ok": not violations,
        "sandwich_violations": len(violations),
        "error_rows": sum(1 for r in report.rows if r.kind == "error"),
        "pole_rows": sum(1 for r in report.rows if r.kind == "pole"),
        "liminf_pass": all(liminf),
        "region_pass": all(region),
        "target_lower_pass": all(lower_side),
        "target_upper_fraction": (sum(upper_side) / len(upper_side)) if upper_side else None,
        "degenerate_target_pass": all(degenerate_target),
        "trend_fraction": fraction,
        "trend_status": trend_status,
    }
    summary["passed"] = all(summary[k] for k in (
        "sandwich_ok", "liminf_pass", "region_pass", "target_lower_pass", "degenerate_target_pass"))
    return {"points": points, "summary": summary}
