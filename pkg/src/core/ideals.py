"""三点消没理想的生成元、三条直线、极限理想与基变换组合"""
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from config import IDEAL_CONFIG
from src.utils.log import get_logger
from .bipoly import ONE, Z1, Z2, BiPoly, coefficient_distance, compose_linear, eval_poly
from .cxgeom import CanonicalFrame, PointTriple
from .errors import CollinearTripleError, DegenerateInputError

logger = get_logger(__name__)

TRIPLE_IDEAL = "TripleIdeal"
COMPLETE_INTERSECTION_LIMIT = "CompleteIntersectionLimit"
MAXIMAL_SQUARE = "MaximalSquare"


@dataclass(frozen=True)
class IdealPresentation:
    """带标签的生成元列表"""
    generators: List[BiPoly]
    label: str
    m: Optional[complex] = None
    names: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.label == COMPLETE_INTERSECTION_LIMIT and len(self.generators) != 2:
            raise ValueError("完全交极限理想必须恰有 2 个生成元")
        if self.label == MAXIMAL_SQUARE and len(self.generators) != 3:
            raise ValueError("𝔐₀² 必须恰有 3 个生成元")

    def to_standard(self, frame: CanonicalFrame) -> "IdealPresentation":
        """把标架坐标下的生成元推到标准坐标：z^eps_j = z · ē_j"""
        e1, e2 = frame.e1, frame.e2
        pushed = [
            compose_linear(g, e1.c1.conjugate(), e1.c2.conjugate(), e2.c1.conjugate(), e2.c2.conjugate())
            for g in self.generators
        ]
        return IdealPresentation(pushed, self.label, self.m, list(self.names))

    def to_record(self) -> dict:
        record = {
            "label": self.label,
            "generators": [
                {"name": name, "terms": g.to_records()}
                for name, g in zip(self.names or [f"g{i + 1}" for i in range(len(self.generators))],
                                   self.generators)
            ],
        }
        if self.m is not None:
            record["m"] = {"re": self.m.real, "im": self.m.imag}
        return record


def q_generators(frame: CanonicalFrame) -> IdealPresentation:
    """Q1 = z1² - eps z1 - ((rho - eps)/delta) z2, Q2 = z2(z1 - rho), Q3 = z2(z2 - delta rho)"""
    eps, rho, delta = frame.eps, frame.rho, frame.delta
    if delta == 0:
        raise CollinearTripleError("delta = 0：三点共线")
    ratio = (rho - eps) / delta
    if abs(ratio) > IDEAL_CONFIG["conditioning_limit"]:
        logger.warning("⚠️  Q1 病态：|(rho - eps)/delta| = %.3e", abs(ratio))
    q1 = Z1 * Z1 - eps * Z1 - ratio * Z2
    q2 = Z2 * (Z1 - rho * ONE)
    q3 = Z2 * (Z2 - delta * rho * ONE)
    return IdealPresentation([q1, q2, q3], TRIPLE_IDEAL, names=["Q1", "Q2", "Q3"])


def line_polys(frame: CanonicalFrame) -> List[BiPoly]:
    """l1 = z2, l2 = z2 - delta z1, l3 = z2 - delta (rho/(rho - eps))(z1 - eps)"""
    eps, rho, delta = frame.eps, frame.rho, frame.delta
    if abs(rho - eps) <= IDEAL_CONFIG["residual_tol"] * eps:
        raise DegenerateInputError("rho = eps：第三条直线无定义")
    l1 = Z2
    l2 = Z2 - delta * Z1
    l3 = Z2 - (delta * rho / (rho - eps)) * (Z1 - eps * ONE)
    return [l1, l2, l3]


def line_product(frame: CanonicalFrame) -> BiPoly:
    """P = l1 l2 l3，属于理想的平方"""
    l1, l2, l3 = line_polys(frame)
    return l1 * l2 * l3


def limit_ideal_ci(m: complex) -> IdealPresentation:
    """⟨z2 - m z1², z1³⟩"""
    m = complex(m)
    return IdealPresentation([Z2 - m * Z1 * Z1, Z1 ** 3], COMPLETE_INTERSECTION_LIMIT, m=m,
                             names=["z2 - m z1^2", "z1^3"])


def maximal_square() -> IdealPresentation:
    """𝔐₀² = ⟨z1², z1 z2, z2²⟩"""
    return IdealPresentation([Z1 * Z1, Z1 * Z2, Z2 * Z2], MAXIMAL_SQUARE,
                             names=["z1^2", "z1 z2", "z2^2"])


def ci_limit_generators(frame: CanonicalFrame) -> List[BiPoly]:
    """z2 - (delta/(rho - eps)) z1(z1 - eps) 与 z1(z1 - eps)(z1 - rho)，极限为 z2 - m z1² 与 z1³"""
    eps, rho = frame.eps, frame.rho
    rescaled = Z2 - frame.m * Z1 * (Z1 - eps * ONE)
    cubic = Z1 * (Z1 - eps * ONE) * (Z1 - rho * ONE)
    return [rescaled, cubic]


def ci_limit_distance(frame: CanonicalFrame, m: complex) -> float:
    """重标度生成元到 {z2 - m z1², z1³} 的系数距离之和"""
    limit = limit_ideal_ci(m).generators
    return sum(coefficient_distance(g, h) for g, h in zip(ci_limit_generators(frame), limit))


def membership_identity(m: complex) -> BiPoly:
    """z1 z2 - [z1 (z2 - m z1²) + m z1³]，恒为零多项式"""
    g, cubic = limit_ideal_ci(m).generators
    return Z1 * Z2 - (Z1 * g + complex(m) * cubic)


@dataclass(frozen=True)
class MonomialLimits:
    """f1, f2, f3 以及到 z1², z1 z2, z2² 的系数距离（标准坐标）"""
    polys: List[BiPoly]
    distances: List[float]
    f2_symmetric: BiPoly
    f2_symmetric_distance: float

    def to_record(self) -> dict:
        return {
            "f": [p.to_records() for p in self.polys],
            "distances": list(self.distances),
            "f2_symmetric": self.f2_symmetric.to_records(),
            "f2_symmetric_distance": self.f2_symmetric_distance,
        }


def monomial_limit_combinations(frame: CanonicalFrame, alpha: np.ndarray = None) -> MonomialLimits:
    """f1 = α11² Q1 + 2α11α12 Q2 + α12² Q3 等，f2 按原公式（含两次 Q2）"""
    a = frame.alpha() if alpha is None else np.asarray(alpha, dtype=complex)
    q1, q2, q3 = q_generators(frame).to_standard(frame).generators
    a11, a12, a21, a22 = (complex(a[i, j]) for i, j in ((0, 0), (0, 1), (1, 0), (1, 1)))
    f1 = a11 ** 2 * q1 + 2 * a11 * a12 * q2 + a12 ** 2 * q3
    f2 = (a11 * a22 + a12 * a21) * q2 + a11 * a21 * q1 + a12 * a22 * q2
    f3 = a21 ** 2 * q1 + 2 * a21 * a22 * q2 + a22 ** 2 * q3
    f2_sym = a11 * a21 * q1 + (a11 * a22 + a12 * a21) * q2 + a12 * a22 * q3
    targets = maximal_square().generators
    distances = [coefficient_distance(f, t) for f, t in zip((f1, f2, f3), targets)]
    return MonomialLimits([f1, f2, f3], distances, f2_sym, coefficient_distance(f2_sym, targets[1]))


def vanishing_residual(p: BiPoly, t: PointTriple) -> List[float]:
    """|p(a_i)| / max(1, Σ|系数|)"""
    norm = max(1.0, p.l1_norm())
    return [abs(eval_poly(p, a)) / norm for a in t.points]
