"""把收缩的三点族分到各个情形：完全交极限 (参数 m)、退化 𝔐₀²、一般 𝔐₀²、不确定"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import CLASSIFY_CONFIG
from src.utils.log import get_logger
from src.utils.serialization import complex_from_record, complex_to_record
from .cxgeom import (
    CanonicalFrame,
    PointTriple,
    acute_angle,
    build_frame,
    canonicalize,
    chordal_distance,
    normalized_det,
    triangle_angles,
)
from .errors import CollinearTripleError, ConfigurationError, DegenerateInputError, InsufficientDataError

logger = get_logger(__name__)

POWER_LAW = "PowerLaw"
SAMPLE_TABLE = "SampleTable"

COMPLETE_INTERSECTION = "CompleteIntersection"
MAX_SQUARE_DEGENERATE = "MaxSquareDegenerate"
MAX_SQUARE_GENERIC = "MaxSquareGeneric"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class FamilySpec:
    """参数化退化族 eps -> 三点

    PowerLaw：a1 = 0, a2 = (eps, 0), a3 = (c_rho eps^p_rho, c_delta eps^p_delta · c_rho eps^p_rho)
    SampleTable：[(eps_k, PointTriple)]，eps_k 严格递减
    """
    kind: str
    rho_coeff: complex = 0.5
    rho_exp: float = 1.0
    delta_coeff: complex = 1.0
    delta_exp: float = 1.0
    samples: Tuple[Tuple[float, PointTriple], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in (POWER_LAW, SAMPLE_TABLE):
            raise ConfigurationError(f"未知的族类型：{self.kind}")
        if self.kind == SAMPLE_TABLE:
            eps = [e for e, _ in self.samples]
            if len(eps) < 4:
                raise ConfigurationError("样本表至少需要 4 个样本")
            if any(b >= a for a, b in zip(eps, eps[1:])) or eps[-1] <= 0:
                raise ConfigurationError("样本表的 eps 必须严格递减且为正")

    @classmethod
    def power_law(cls, rho_coeff: complex, rho_exp: float, delta_coeff: complex, delta_exp: float) -> "FamilySpec":
        return cls(POWER_LAW, complex(rho_coeff), float(rho_exp), complex(delta_coeff), float(delta_exp))

    @classmethod
    def sample_table(cls, samples: Sequence[Tuple[float, PointTriple]]) -> "FamilySpec":
        return cls(SAMPLE_TABLE, samples=tuple((float(e), t) for e, t in samples))

    def validation_flags(self) -> List[str]:
        """违反 |rho| <= eps/2 等约束时只标记，不拒绝"""
        flags = []
        if self.kind == POWER_LAW:
            if self.rho_exp < 1:
                flags.append("rho_exp_below_one")
            if self.rho_exp == 1 and abs(self.rho_coeff) > 0.5:
                flags.append("rho_coeff_exceeds_half")
        return flags

    def describe(self) -> dict:
        if self.kind == POWER_LAW:
            return {
                "kind": self.kind,
                "rho_coeff": complex_to_record(self.rho_coeff),
                "rho_exp": self.rho_exp,
                "delta_coeff": complex_to_record(self.delta_coeff),
                "delta_exp": self.delta_exp,
            }
        return {"kind": self.kind, "samples": len(self.samples), "eps": [e for e, _ in self.samples]}


def _check_schedule(schedule: Sequence[float]) -> List[float]:
    schedule = [float(e) for e in schedule]
    if not schedule:
        raise ConfigurationError("eps 序列为空")
    if any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise ConfigurationError("eps 序列必须严格递减")
    if schedule[-1] <= 0 or schedule[0] >= 0.5:
        raise ConfigurationError("eps 必须位于 (0, 0.5)")
    return schedule


def sample_family(spec: FamilySpec, eps_schedule: Optional[Sequence[float]] = None) -> List[Tuple[float, CanonicalFrame]]:
    """按 eps 序列生成标架；PowerLaw 直接解析构造，SampleTable 走 canonicalize + build_frame"""
    if spec.kind == POWER_LAW:
        if eps_schedule is None:
            raise ConfigurationError("PowerLaw 族需要 eps 序列")
        frames = []
        for eps in _check_schedule(eps_schedule):
            rho = spec.rho_coeff * eps ** spec.rho_exp
            delta = spec.delta_coeff * eps ** spec.delta_exp
            if delta == 0:
                raise CollinearTripleError(f"eps = {eps}: delta = 0")
            frames.append((eps, CanonicalFrame.from_parameters(eps, rho, delta)))
        return frames

    table = list(spec.samples)
    if eps_schedule is not None:
        wanted = _check_schedule(eps_schedule)
        chosen = []
        for eps in wanted:
            match = [s for s in table if abs(s[0] - eps) <= 1e-12 * eps]
            if not match:
                raise ConfigurationError(f"样本表中没有 eps = {eps}")
            chosen.append(match[0])
        table = chosen
    return [(eps, build_frame(canonicalize(*t.points))) for eps, t in table]


def m_sequence(frames: Sequence[CanonicalFrame]) -> List[complex]:
    """m_k = delta_k / (rho_k - eps_k)"""
    out = []
    for f in frames:
        if f.rho == f.eps:
            raise DegenerateInputError("rho = eps")
        out.append(f.m)
    return out


def theta_criterion_sequence(frames: Sequence[CanonicalFrame]) -> List[float]:
    """crit_k = ‖a2‖ / theta_k"""
    crit, _ = _theta_criterion_with_check(frames)
    return crit


def _theta_criterion_with_check(frames: Sequence[CanonicalFrame]) -> Tuple[List[float], float]:
    crit, worst = [], 0.0
    for f in frames:
        t = f.standard_triple()
        theta = acute_angle(t)
        if theta == 0.0:
            raise CollinearTripleError("theta = 0")
        value = f.eps / theta
        check = f.eps / math.asin(normalized_det(t))
        worst = max(worst, abs(check - value) / value)
        crit.append(value)
    return crit, worst


def _loglog_slope(eps: Sequence[float], values: Sequence[float]) -> float:
    """log(values) 对 log(1/eps) 的最小二乘斜率"""
    x = np.log(1.0 / np.asarray(eps, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def _richardson(eps: Sequence[float], values: Sequence[complex]) -> complex:
    """过最后三点的插值多项式在 eps = 0 处的值"""
    xs, ys = list(eps[-3:]), list(values[-3:])
    total = 0j
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        weight = 1.0
        for j, xj in enumerate(xs):
            if j != i:
                weight *= (0.0 - xj) / (xi - xj)
        total += weight * yi
    return total


def _m_converges(m: Sequence[complex]) -> bool:
    diffs = [abs(b - a) for a, b in zip(m, m[1:])]
    steps = min(3, len(diffs) - 1)
    contracting = steps > 0 and all(
        diffs[-i] <= 0.5 * diffs[-i - 1] for i in range(1, steps + 1)
    )
    scale = max(abs(m[-1]), 1e-300)
    spread = max(abs(v - m[-1]) for v in m) / scale
    return contracting or spread < CLASSIFY_CONFIG["spread_tol"]


def _max_pairwise_gap(f: CanonicalFrame) -> float:
    dirs = f.standard_triple().directions()
    return max(chordal_distance(dirs[i], dirs[j]) for i, j in ((0, 1), (0, 2), (1, 2)))


def _diameter_over_middle_angle(t: PointTriple) -> float:
    angle = triangle_angles(t)[1]
    return t.d3 / angle if angle > 0 else math.inf


def _directions_converge(previous: CanonicalFrame, last: CanonicalFrame) -> bool:
    before, after = previous.standard_triple().directions(), last.standard_triple().directions()
    worst = max(min(chordal_distance(v, u) for u in before) for v in after)
    return worst <= CLASSIFY_CONFIG["chordal_gap"]


@dataclass(frozen=True)
class Classification:
    """情形标签 + 完整证据（可直接 JSON 序列化）"""
    regime: str
    m: Optional[complex] = None
    evidence: Dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "regime": self.regime,
            "m": None if self.m is None else complex_to_record(self.m),
            "evidence": self.evidence,
        }

    @classmethod
    def from_record(cls, record: dict) -> "Classification":
        m = record.get("m")
        return cls(record["regime"], None if m is None else complex_from_record(m), record.get("evidence", {}))


def classify_frames(eps_schedule: Sequence[float], frames: Sequence[CanonicalFrame],
                    family_flags: Sequence[str] = ()) -> Classification:
    """对已采样的标架做判定（顺序、确定性）"""
    cfg = CLASSIFY_CONFIG
    eps = [f.eps for f in frames]
    if len(frames) < 4:
        raise InsufficientDataError("至少需要 4 个 eps 样本")
    if math.log10(eps[0] / eps[-1]) < 3 - 1e-9:
        raise InsufficientDataError("eps 序列必须跨越至少 3 个数量级")

    m = m_sequence(frames)
    crit, crit_check = _theta_criterion_with_check(frames)
    gaps = [_max_pairwise_gap(f) for f in frames]
    window = gaps[-cfg["direction_window"]:]

    crit_slope = _loglog_slope(eps, crit)
    degenerate = crit_slope < cfg["slope_threshold"] and crit[-1] < crit[0] / cfg["decade_drop"]
    converges = _m_converges(m)
    m_slope = _loglog_slope(eps, [max(abs(v), 1e-300) for v in m])
    diverges = m_slope > cfg["divergence_slope"]
    generic = min(window) > cfg["chordal_gap"]

    deltabig = [math.log(abs(f.delta)) / math.log(f.eps) for f in frames]
    middle = [_diameter_over_middle_angle(f.standard_triple()) for f in frames]
    flags = list(family_flags)
    if not all(f.rho_within_half_eps() for f in frames):
        flags.append("rho_bound_exceeded")

    m_limit = _richardson(eps, m)
    if generic:
        regime, m_value = MAX_SQUARE_GENERIC, None
        if not _directions_converge(frames[-2], frames[-1]):
            flags.append("directions_not_converging")
    elif degenerate and converges:
        regime, m_value = INCONCLUSIVE, None
        flags.append("contradictory_verdicts")
        logger.warning("⚠️  m_k 收敛与 crit_k → 0 同时成立，判为 Inconclusive")
    elif degenerate:
        regime, m_value = MAX_SQUARE_DEGENERATE, None
    elif converges:
        regime, m_value = COMPLETE_INTERSECTION, m_limit
    else:
        regime, m_value = INCONCLUSIVE, None
    if not generic and diverges != degenerate:
        flags.append("equivalence_mismatch")

    evidence = {
        "eps": eps,
        "m_k": [complex_to_record(v) for v in m],
        "m_extrapolated": complex_to_record(m_limit),
        "crit_k": crit,
        "crit_cross_check": crit_check,
        "direction_gaps": gaps,
        "diameter_over_middle_angle": middle,
        "log_delta_over_log_eps": deltabig,
        "slopes": {"crit": crit_slope, "abs_m": m_slope},
        "verdicts": {
            "directions_split": generic,
            "crit_to_zero": degenerate,
            "m_converges": converges,
            "m_diverges": diverges,
            "deltabig_hypothesis": deltabig[-1] < cfg["deltabig_ratio"] and deltabig[-1] < deltabig[0],
        },
        "flags": flags,
    }
    return Classification(regime, m_value, evidence)


def classify(spec: FamilySpec, eps_schedule: Optional[Sequence[float]] = None) -> Classification:
    """采样 + 判定"""
    sampled = sample_family(spec, eps_schedule)
    return classify_frames([e for e, _ in sampled], [f for _, f in sampled], spec.validation_flags())
