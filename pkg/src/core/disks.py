"""解析圆盘 h: 𝔻 -> 𝔻²：候选族、可容许性校验、Nelder-Mead 搜索

若 h(𝔻) ⊂ 𝔻²，h(ζ0) = z，且 h(ζ_j) = P_j，则
    G(z) <= Σ_j log|(ζ_j - ζ0) / (1 - conj(ζ_j) ζ0)|
每个候选在取值前都要通过 admissibility_failure 校验。
"""
import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import minimize

from config import ENVELOPE_CONFIG
from src.utils.log import get_logger
from .cxgeom import Complex2
from .errors import DegenerateInputError, NoAdmissibleDiskError, OutOfDomainError

logger = get_logger(__name__)

AFFINE_ONE_POLE = "AffineOnePole"
AFFINE_TWO_POLE = "AffineTwoPole"
QUADRATIC_PHI = "QuadraticPhi"
PARABOLIC_THREE_POLE = "ParabolicThreePole"

# 合法候选的值都 <= 0
PENALTY = 1.0


def disk_green(pole: complex, zeta: complex) -> float:
    """单位圆盘的 Green 函数 log|(ζ - pole) / (1 - conj(pole) ζ)|"""
    pole, zeta = complex(pole), complex(zeta)
    if abs(zeta) >= 1.0 or abs(pole) >= 1.0:
        raise OutOfDomainError(f"不在开单位圆盘内：pole={pole}, zeta={zeta}")
    if zeta == pole:
        return -math.inf
    return math.log(abs(zeta - pole) / abs(1.0 - pole.conjugate() * zeta))


@dataclass(frozen=True)
class DiskCandidate:
    """h(ζ) = (x(ζ), y(ζ))，系数按升幂排列"""
    family: str
    parameters: Tuple[complex, ...]
    x: Tuple[complex, ...]
    y: Tuple[complex, ...]
    base: complex
    preimages: Tuple[Tuple[int, complex], ...] = field(default_factory=tuple)

    def __call__(self, zeta: complex) -> Tuple[complex, complex]:
        return complex(npoly.polyval(zeta, self.x)), complex(npoly.polyval(zeta, self.y))

    def pole_terms(self) -> List[float]:
        """每个命中极点的一维 Green 项，升序"""
        return sorted(disk_green(zeta, self.base) for _, zeta in self.preimages)

    def value(self, max_poles: Optional[int] = None) -> float:
        """最负的 max_poles 项之和"""
        terms = self.pole_terms()
        if max_poles is not None:
            terms = terms[:max_poles]
        return float(sum(terms))

    def to_record(self) -> dict:
        def pair(c):
            return {"re": c.real, "im": c.imag}
        return {
            "family": self.family,
            "parameters": [pair(c) for c in self.parameters],
            "x": [pair(c) for c in self.x],
            "y": [pair(c) for c in self.y],
            "base": pair(self.base),
            "preimages": [{"pole": i, "zeta": pair(zeta)} for i, zeta in self.preimages],
        }


@lru_cache(maxsize=8)
def _circle(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


def sup_bound(coeffs: Sequence[complex], samples: Optional[int] = None) -> float:
    """闭单位圆盘上 |Σ c_k ζ^k| 的上界

    一次式精确；高次用边界采样最大值加 Lipschitz 余量 Σ k|c_k| · π/n，
    再与 Σ|c_k| 取小。
    """
    c = np.asarray(coeffs, dtype=complex)
    moduli = np.abs(c)
    total = float(moduli.sum())
    if len(c) <= 2:
        return total
    n = samples or ENVELOPE_CONFIG["boundary_samples"]
    sampled = float(np.abs(npoly.polyval(_circle(n), c)).max())
    lipschitz = float(np.sum(moduli * np.arange(len(c))))
    return min(total, sampled + lipschitz * math.pi / n)


def pole_tolerance(poles: Sequence[Complex2]) -> float:
    """原像容差随极点间距缩放"""
    tol = ENVELOPE_CONFIG["preimage_tol"]
    gaps = [(p - q).norm() for i, p in enumerate(poles) for q in poles[i + 1:]]
    gaps = [g for g in gaps if g > 0]
    return tol * min([1.0] + gaps)


def admissibility_failure(candidate: DiskCandidate, z: Complex2, poles: Sequence[Complex2]) -> Optional[str]:
    """返回不合格原因；合格时返回 None"""
    margin = ENVELOPE_CONFIG["margin"]
    if not candidate.preimages:
        return "no_pole"
    if abs(candidate.base) >= 1.0:
        return "base_outside"
    if any(abs(zeta) >= 1.0 for _, zeta in candidate.preimages):
        return "preimage_outside"
    if sup_bound(candidate.x) > 1.0 - margin or sup_bound(candidate.y) > 1.0 - margin:
        return "leaves_bidisk"
    hx, hy = candidate(candidate.base)
    if math.hypot(abs(hx - z.c1), abs(hy - z.c2)) > ENVELOPE_CONFIG["preimage_tol"]:
        return "misses_base"
    tol = pole_tolerance(poles)
    for index, zeta in candidate.preimages:
        px, py = candidate(zeta)
        pole = poles[index]
        if math.hypot(abs(px - pole.c1), abs(py - pole.c2)) > tol:
            return "misses_pole"
    return None


# ============ 候选族 ============

def affine_disk(z: Complex2, poles: Sequence[Complex2], index: int, t_c: complex) -> Optional[DiskCandidate]:
    """直线 a + t(z - a) 上的圆盘 t = t_c + Rζ，R 取可容许的最大值"""
    a = poles[index]
    v = z - a
    slack = 1.0 - 2 * ENVELOPE_CONFIG["margin"]
    centres = (a.c1 + t_c * v.c1, a.c2 + t_c * v.c2)
    slopes = (v.c1, v.c2)
    radius = math.inf
    for centre, slope in zip(centres, slopes):
        room = slack - abs(centre)
        if room <= 0:
            return None
        if slope != 0:
            radius = min(radius, room / abs(slope))
    if not math.isfinite(radius):
        return None

    tol = pole_tolerance(poles)
    main = 0 if abs(v.c1) >= abs(v.c2) else 1
    preimages = []
    for k, pole in enumerate(poles):
        coords, origin = (pole.c1, pole.c2), (a.c1, a.c2)
        t = (coords[main] - origin[main]) / slopes[main]
        other = 1 - main
        if abs(origin[other] + t * slopes[other] - coords[other]) > tol:
            continue
        zeta = (t - t_c) / radius
        if abs(zeta) < 1.0:
            preimages.append((k, zeta))
    family = AFFINE_TWO_POLE if len(preimages) >= 2 else AFFINE_ONE_POLE
    return DiskCandidate(
        family=family,
        parameters=(complex(t_c), complex(radius)),
        x=(centres[0], radius * v.c1),
        y=(centres[1], radius * v.c2),
        base=(1.0 - t_c) / radius,
        preimages=tuple(preimages),
    )


def quadratic_disk(z: Complex2, poles: Sequence[Complex2], pair: Tuple[int, int],
                   centre: complex, sigma: float) -> Optional[DiskCandidate]:
    """y = L(x) + λ(x - x_i)(x - x_j)，L 为过两极点的直线，x = c + sζ；λ 使圆盘过 z"""
    i, j = pair
    xi, yi = poles[i].c1, poles[i].c2
    xj, yj = poles[j].c1, poles[j].c2
    if xi == xj:
        return None
    slope = (yj - yi) / (xj - xi)
    denom = (z.c1 - xi) * (z.c1 - xj)
    if denom == 0:
        return None
    lam = (z.c2 - yi - slope * (z.c1 - xi)) / denom
    room = 1.0 - 2 * ENVELOPE_CONFIG["margin"] - abs(centre)
    if room <= 0:
        return None
    s = room / (1.0 + math.exp(-sigma))
    shifted_i = np.array([centre - xi, s], dtype=complex)
    shifted_j = np.array([centre - xj, s], dtype=complex)
    y = npoly.polyadd(npoly.polyadd([yi], slope * shifted_i), lam * npoly.polymul(shifted_i, shifted_j))

    tol = pole_tolerance(poles)
    preimages = []
    for k, pole in enumerate(poles):
        zeta = (pole.c1 - centre) / s
        if abs(zeta) >= 1.0:
            continue
        if k in pair or abs(npoly.polyval(zeta, y) - pole.c2) <= tol:
            preimages.append((k, zeta))
    return DiskCandidate(
        family=QUADRATIC_PHI,
        parameters=(complex(lam), complex(centre), complex(s)),
        x=(complex(centre), complex(s)),
        y=tuple(complex(c) for c in y),
        base=(z.c1 - centre) / s,
        preimages=tuple(preimages),
    )


def frame_layout(poles: Sequence[Complex2]) -> Optional[Tuple[float, complex, complex]]:
    """(0,0), (eps,0), (rho, w) 形式时返回 (eps, rho, w)"""
    if len(poles) != 3:
        return None
    p1, p2, p3 = poles
    if p1.c1 != 0 or p1.c2 != 0 or p2.c2 != 0 or p3.c2 == 0:
        return None
    if p2.c1 == 0 or p3.c1 == 0 or p3.c1 == p2.c1:
        return None
    return p2.c1, p3.c1, p3.c2


def parabolic_start(layout: Tuple[complex, complex, complex], beta0: float = 0.98) -> Tuple[complex, complex]:
    """取 η/ζ3 = eps/rho，使三个极点附近的 x 近似线性，|β| ≈ beta0"""
    eps, rho, w = layout
    zeta3 = cmath.sqrt(w / (beta0 * (1.0 - eps / rho)))
    return eps / rho * zeta3, zeta3


def _newton_monomial(nodes: Sequence[complex], values: Sequence[complex]) -> np.ndarray:
    """插值多项式的升幂系数（差商 + Horner 展开）"""
    coef = [complex(v) for v in values]
    n = len(nodes)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (nodes[i] - nodes[i - level])
    poly = np.array([coef[-1]], dtype=complex)
    for i in range(n - 2, -1, -1):
        poly = npoly.polyadd(npoly.polymul(poly, [-nodes[i], 1.0]), [coef[i]])
    return poly


def parabolic_disk(z: Complex2, poles: Sequence[Complex2], root: int,
                   eta: complex, zeta3: complex) -> Optional[DiskCandidate]:
    """y = βζ(ζ - η) 过三个极点 (ζ = 0, η, ζ3)，x 为过四个节点的三次插值"""
    layout = frame_layout(poles)
    if layout is None:
        return None
    eps, rho, w = layout
    denom = zeta3 * (zeta3 - eta)
    if denom == 0:
        return None
    beta = w / denom
    disc = cmath.sqrt(beta * beta * eta * eta + 4.0 * beta * z.c2)
    base = (beta * eta + (disc if root == 0 else -disc)) / (2.0 * beta)
    nodes = [0j, complex(eta), complex(zeta3), base]
    if min(abs(a - b) for k, a in enumerate(nodes) for b in nodes[k + 1:]) == 0:
        return None
    x = _newton_monomial(nodes, [0j, eps, rho, z.c1])
    y = (0j, -beta * eta, beta)
    return DiskCandidate(
        family=PARABOLIC_THREE_POLE,
        parameters=(complex(eta), complex(zeta3), complex(beta)),
        x=tuple(complex(c) for c in x),
        y=tuple(complex(c) for c in y),
        base=base,
        preimages=((0, 0j), (1, complex(eta)), (2, complex(zeta3))),
    )


# ============ 搜索 ============

@dataclass
class DiskSearch:
    """每个命中极点数上限下的最优合法候选"""
    best: Dict[int, Tuple[float, DiskCandidate]] = field(default_factory=dict)
    evaluated: int = 0
    valid: int = 0

    def offer(self, candidate: Optional[DiskCandidate], z: Complex2, poles: Sequence[Complex2]) -> float:
        self.evaluated += 1
        if candidate is None or admissibility_failure(candidate, z, poles) is not None:
            return PENALTY
        self.valid += 1
        for level in range(1, len(poles) + 1):
            value = candidate.value(level)
            current = self.best.get(level)
            if current is None or value < current[0]:
                self.best[level] = (value, candidate)
        return candidate.value()

    def at_most(self, max_poles: int) -> Tuple[float, DiskCandidate]:
        levels = [k for k in self.best if k <= max_poles]
        if not levels:
            raise NoAdmissibleDiskError("没有合法的候选圆盘")
        return self.best[max(levels)]


def _searches(z: Complex2, poles: Sequence[Complex2]) -> List[Tuple[int, int, Callable, np.ndarray]]:
    """(族编号, 极点编号, params -> candidate, 起点)"""
    jobs = []
    for k in range(len(poles)):
        jobs.append((0, k, lambda p, k=k: affine_disk(z, poles, k, complex(p[0], p[1])), np.zeros(2)))
    pairs = [(i, j) for i in range(len(poles)) for j in range(i + 1, len(poles))]
    for n, pair in enumerate(pairs):
        jobs.append((1, n, lambda p, pair=pair: quadratic_disk(z, poles, pair, complex(p[0], p[1]), p[2]),
                     np.array([0.0, 0.0, 3.0])))
    layout = frame_layout(poles)
    if layout is not None:
        eta0, zeta30 = parabolic_start(layout)
        for root in (0, 1):
            jobs.append((2, root, lambda p, root=root: parabolic_disk(
                z, poles, root, eta0 * complex(1.0 + p[0], p[1]), zeta30 * complex(1.0 + p[2], p[3])),
                np.zeros(4)))
    return jobs


def search_disks(z: Complex2, poles: Sequence[Complex2], budget: Optional[int] = None,
                 seed: Optional[int] = None) -> DiskSearch:
    """各族各自 budget 次重启的 Nelder-Mead；随机起点由 SeedSequence([seed, 族, 极点]) 决定"""
    cfg = ENVELOPE_CONFIG
    budget = cfg["budget"] if budget is None else int(budget)
    seed = cfg["seed"] if seed is None else int(seed)
    if budget < 1:
        raise ValueError("budget 至少为 1")
    search = DiskSearch()

    for family_idx, pole_idx, build, start in _searches(z, poles):
        def objective(params, build=build):
            try:
                return search.offer(build(params), z, poles)
            except (ArithmeticError, ValueError, DegenerateInputError):
                search.evaluated += 1
                return PENALTY

        rng = np.random.default_rng(np.random.SeedSequence([seed, family_idx, pole_idx]))
        for restart in range(budget):
            x0 = start if restart == 0 else start + rng.normal(scale=cfg["simplex_scale"], size=start.size)
            simplex = np.vstack([x0] + [x0 + cfg["simplex_scale"] * e for e in np.eye(start.size)])
            minimize(objective, x0, method="Nelder-Mead",
                     options={"maxiter": cfg["max_iter"], "initial_simplex": simplex})
    return search
