"""三极点双圆盘 Green 函数的下界、上界与极限值

所有查询都在标架坐标中进行：Ω 为标架坐标下的单位双圆盘，
极点为 (0,0), (eps,0), (rho, delta·rho)。
"""
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from config import ENVELOPE_CONFIG
from src.utils.log import get_logger
from src.utils.serialization import float_to_json, to_jsonable
from .bipoly import ONE, Z1, Z2, BiPoly, SupNormResult, eval_poly, sup_norm_bidisk
from .classify import (
    COMPLETE_INTERSECTION,
    INCONCLUSIVE,
    MAX_SQUARE_DEGENERATE,
    MAX_SQUARE_GENERIC,
    Classification,
)
from .cxgeom import CanonicalFrame, Complex2
from .disks import disk_green, search_disks
from .errors import (
    CollinearTripleError,
    DegenerateInputError,
    NoAdmissibleDiskError,
    OutOfDomainError,
    SandwichViolationError,
)
from .ideals import line_product, q_generators

logger = get_logger(__name__)

LOWER = "Lower"
UPPER = "Upper"
EXACT_LIMIT = "ExactLimit"
REFERENCE_VALUE = "ReferenceValue"

__all__ = [
    "GreenBound",
    "disk_green",
    "one_pole_green",
    "lower_bound_poly",
    "lower_bound_best",
    "upper_bound_two_point",
    "disk_envelope_for_poles",
    "upper_bound_disk_envelope",
    "exact_limit",
]


@dataclass(frozen=True)
class GreenBound:
    """带证书的界；value 可以是 -inf"""
    kind: str
    value: float
    certificate: Dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "value": float_to_json(self.value),
            "certificate": to_jsonable(self.certificate),
        }


def _log_abs(x: complex) -> float:
    return -math.inf if x == 0 else math.log(abs(x))


def _check_bidisk(z: Complex2) -> None:
    if abs(z.c1) >= 1.0 or abs(z.c2) >= 1.0:
        raise OutOfDomainError(f"不在开双圆盘内：({z.c1}, {z.c2})")


def one_pole_green(z: Complex2, pole: Complex2) -> float:
    """单极点双圆盘 Green 函数 max(g(a1, z1), g(a2, z2))"""
    _check_bidisk(z)
    return max(disk_green(pole.c1, z.c1), disk_green(pole.c2, z.c2))


def lower_bound_poly(z: Complex2, p: BiPoly, order: int, norm: SupNormResult, name: str = "") -> GreenBound:
    """(1/order) log(|p(z)| / (‖p‖ + 不确定度))"""
    if order < 1:
        raise ValueError("order 必须为正整数")
    denominator = norm.value + norm.uncertainty
    if not denominator > 0:
        raise DegenerateInputError("范数必须为正")
    modulus = abs(eval_poly(p, z))
    value = -math.inf if modulus == 0 else math.log(modulus / denominator) / order
    return GreenBound(LOWER, value, {
        "polynomial": name or str(p),
        "terms": p.to_records(),
        "order": order,
        "norm": norm.to_record(),
    })


@lru_cache(maxsize=128)
def _certificates(frame: CanonicalFrame, resolution: Optional[int]) -> Tuple[Tuple[str, BiPoly, int, SupNormResult], ...]:
    """候选多项式及其范数，按标架缓存"""
    try:
        q1, q2, q3 = q_generators(frame).generators
        polys = [("Q1", q1, 1)]
    except CollinearTripleError:
        q2 = Z2 * (Z1 - frame.rho * ONE)
        q3 = Z2 * Z2
        polys = []
    try:
        polys.append(("P", line_product(frame), 2))
    except DegenerateInputError:
        logger.warning("⚠️  rho = eps：跳过直线乘积 P")
    polys += [("Q2", q2, 1), ("Q3", q3, 1)]
    return tuple((name, p, order, sup_norm_bidisk(p, resolution)) for name, p, order in polys)


def lower_bound_best(z: Complex2, frame: CanonicalFrame, resolution: Optional[int] = None) -> GreenBound:
    """候选集 {Q1, P, Q2, Q3} 上 lower_bound_poly 的最大值"""
    best: Optional[GreenBound] = None
    values = {}
    for name, p, order, norm in _certificates(frame, resolution):
        bound = lower_bound_poly(z, p, order, norm, name)
        values[name] = float_to_json(bound.value)
        if best is None or bound.value > best.value:
            best = bound
    certificate = dict(best.certificate)
    certificate["candidates"] = values
    return GreenBound(LOWER, best.value, certificate)


def upper_bound_two_point(z: Complex2, eps: float) -> GreenBound:
    """双极点 {(0,0), (eps,0)} 的精确 Green 函数 max(g(0,z1) + g(eps,z1), log|z2|)"""
    _check_bidisk(z)
    first = disk_green(0.0, z.c1) + disk_green(eps, z.c1)
    value = max(first, _log_abs(z.c2))
    return GreenBound(UPPER, value, {"formula": "two_point", "eps": float(eps)})


def _distinct(poles: Sequence[Complex2]) -> List[Complex2]:
    out: List[Complex2] = []
    for p in poles:
        if p not in out:
            out.append(p)
    return out


def disk_envelope_for_poles(z: Complex2, poles: Sequence[Complex2], budget: Optional[int] = None,
                            seed: Optional[int] = None, max_poles: int = 3) -> GreenBound:
    """任意极点集（重合的极点只算一次）上的圆盘包络，外加单极点乘积公式"""
    _check_bidisk(z)
    poles = _distinct(poles)
    if z in poles:
        return GreenBound(UPPER, -math.inf, {"family": "pole"})

    single = [one_pole_green(z, p) for p in poles]
    k = min(range(len(single)), key=lambda i: single[i])
    value, certificate = single[k], {"family": "OnePoleProduct", "pole": k}
    search = search_disks(z, poles, budget, seed)
    try:
        disk_value, candidate = search.at_most(max_poles)
    except NoAdmissibleDiskError:
        logger.warning("⚠️  z = (%s, %s) 没有合法的候选圆盘", z.c1, z.c2)
        certificate["no_admissible_disk"] = True
    else:
        if disk_value < value:
            value, certificate = disk_value, candidate.to_record()
    certificate.update({"evaluated": search.evaluated, "valid": search.valid, "max_poles": max_poles})
    return GreenBound(UPPER, value, certificate)


def upper_bound_disk_envelope(z: Complex2, frame: CanonicalFrame, budget: Optional[int] = None,
                              seed: Optional[int] = None, max_poles: int = 3,
                              lower: Optional[GreenBound] = None) -> GreenBound:
    """解析圆盘包络与双极点公式取小；低于下界即报 SandwichViolation"""
    envelope = disk_envelope_for_poles(z, frame.points(), budget, seed, max_poles)
    value, certificate = envelope.value, dict(envelope.certificate)
    fallback = bool(certificate.get("no_admissible_disk"))
    if max_poles >= 2:
        two = upper_bound_two_point(z, frame.eps)
        if two.value < value:
            value = two.value
            certificate = {**two.certificate, "evaluated": certificate.get("evaluated", 0),
                           "valid": certificate.get("valid", 0)}
    certificate["fallback"] = fallback

    lower = lower_bound_best(z, frame) if lower is None else lower
    if value < lower.value - ENVELOPE_CONFIG["sandwich_tol"]:
        raise SandwichViolationError(f"上界 {value} 低于下界 {lower.value}")
    return GreenBound(UPPER, value, certificate)


def exact_limit(z: Complex2, classification: Classification) -> GreenBound:
    """完全交情形给出闭式极限；𝔐₀² 情形给出参考值"""
    _check_bidisk(z)
    if z.c1 == 0 and z.c2 == 0:
        raise OutOfDomainError("原点是极点")
    a1, a2 = abs(z.c1), abs(z.c2)
    if classification.regime == COMPLETE_INTERSECTION:
        m = classification.m
        value = max(_log_abs(z.c2 - m * z.c1 * z.c1), 3.0 * _log_abs(z.c1))
        return GreenBound(EXACT_LIMIT, value, {
            "formula": "max(log|z2 - m z1^2|, 3 log|z1|)",
            "m": {"re": m.real, "im": m.imag},
        })
    if classification.regime in (MAX_SQUARE_DEGENERATE, MAX_SQUARE_GENERIC):
        verdicts = classification.evidence.get("verdicts", {})
        return GreenBound(REFERENCE_VALUE, 1.5 * math.log(max(a1, a2)), {
            "formula": "3/2 log max(|z1|, |z2|)",
            "hypothesis": "log|delta| / log|eps| -> 0",
            "hypothesis_holds": bool(verdicts.get("deltabig_hypothesis", False)),
            "maximal_square_green": math.log(math.hypot(a1, a2)) * 2.0,
        })
    # Inconclusive：只有 liminf 下界可作参考
    return GreenBound(REFERENCE_VALUE, max(2.0 * _log_abs(z.c1), 1.5 * _log_abs(z.c2)), {
        "formula": "max(2 log|z1|, 3/2 log|z2|)",
        "regime": INCONCLUSIVE,
    })
