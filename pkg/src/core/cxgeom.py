"""复二维几何：Hermitian 内积、三点规范化、角度 / 行列式不变量、Gram-Schmidt 标架"""
import cmath
import itertools
import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from config import GEOMETRY_CONFIG
from .errors import CollinearTripleError, DegenerateInputError


@dataclass(frozen=True)
class Complex2:
    """C^2 中的点 / 向量"""
    c1: complex
    c2: complex

    def __post_init__(self):
        c1, c2 = complex(self.c1), complex(self.c2)
        if not (cmath.isfinite(c1) and cmath.isfinite(c2)):
            raise DegenerateInputError(f"坐标必须有限：({c1}, {c2})")
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c2", c2)

    def __add__(self, other: "Complex2") -> "Complex2":
        return Complex2(self.c1 + other.c1, self.c2 + other.c2)

    def __sub__(self, other: "Complex2") -> "Complex2":
        return Complex2(self.c1 - other.c1, self.c2 - other.c2)

    def scale(self, s: complex) -> "Complex2":
        return Complex2(s * self.c1, s * self.c2)

    def norm(self) -> float:
        return math.hypot(abs(self.c1), abs(self.c2))

    def sup_norm(self) -> float:
        return max(abs(self.c1), abs(self.c2))

    def sort_key(self) -> Tuple[float, float, float, float]:
        """字典序：c1 实部、虚部，然后 c2"""
        return (self.c1.real, self.c1.imag, self.c2.real, self.c2.imag)


ORIGIN = Complex2(0, 0)


def hermitian_dot(z: Complex2, w: Complex2) -> complex:
    """z · w̄ := z1 w̄1 + z2 w̄2"""
    return z.c1 * w.c1.conjugate() + z.c2 * w.c2.conjugate()


def det2(u: Complex2, v: Complex2) -> complex:
    return u.c1 * v.c2 - u.c2 * v.c1


def chordal_distance(u: Complex2, v: Complex2) -> float:
    """CP^1 中方向类 [u], [v] 的弦距离 |det(u, v)| / (‖u‖‖v‖)"""
    nu, nv = u.norm(), v.norm()
    if nu == 0.0 or nv == 0.0:
        raise DegenerateInputError("零向量没有方向")
    return min(1.0, abs(det2(u, v)) / (nu * nv))


@dataclass(frozen=True)
class PointTriple:
    """三个两两不同的点；d_i = ‖a_j - a_k‖, {i, j, k} = {1, 2, 3}"""
    a1: Complex2
    a2: Complex2
    a3: Complex2
    d1: float = field(init=False)
    d2: float = field(init=False)
    d3: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "d1", (self.a2 - self.a3).norm())
        object.__setattr__(self, "d2", (self.a1 - self.a3).norm())
        object.__setattr__(self, "d3", (self.a1 - self.a2).norm())
        if min(self.d1, self.d2, self.d3) == 0.0:
            raise DegenerateInputError("三点中有重合的点")

    @property
    def points(self) -> List[Complex2]:
        return [self.a1, self.a2, self.a3]

    def directions(self) -> List[Complex2]:
        """[a_i - a_j] 的代表向量，按 v1 = a2 - a3, v2 = a1 - a3, v3 = a1 - a2 排列"""
        return [self.a2 - self.a3, self.a1 - self.a3, self.a1 - self.a2]


def canonicalize(p: Complex2, q: Complex2, r: Complex2) -> PointTriple:
    """编号使 d3 >= d1 >= d2，再平移使 a1 = (0, 0)"""
    tie = GEOMETRY_CONFIG["tie_rtol"]
    for u, v in ((p, q), (p, r), (q, r)):
        if (u - v).norm() == 0.0:
            raise DegenerateInputError(f"点重合：{u}")

    admissible = []
    for a1, a2, a3 in itertools.permutations((p, q, r)):
        d3 = (a1 - a2).norm()
        d1 = (a2 - a3).norm()
        d2 = (a1 - a3).norm()
        if d3 >= d1 * (1.0 - tie) and d1 >= d2 * (1.0 - tie):
            admissible.append((a1.sort_key(), a2.sort_key(), (a1, a2, a3)))
    # 相等距离按字典序打破
    admissible.sort(key=lambda item: (item[0], item[1]))
    a1, a2, a3 = admissible[0][2]
    return PointTriple(ORIGIN, a2 - a1, a3 - a1)


def _arms(t: PointTriple) -> Tuple[Complex2, Complex2, float, float]:
    u, v = t.a2 - t.a1, t.a3 - t.a1
    nu, nv = u.norm(), v.norm()
    if nu == 0.0 or nv == 0.0:
        raise DegenerateInputError("a2 或 a3 与 a1 重合")
    return u, v, nu, nv


def normalized_det(t: PointTriple) -> float:
    """|det(a2/‖a2‖, a3/‖a3‖)|，取值 [0, 1]"""
    u, v, nu, nv = _arms(t)
    return min(1.0, abs(det2(u, v)) / (nu * nv))


def acute_angle(t: PointTriple) -> float:
    """a2、a3 所在复直线之间的锐角，[0, π/2]"""
    u, v, nu, nv = _arms(t)
    cos_theta = min(1.0, max(0.0, abs(hermitian_dot(u, v)) / (nu * nv)))
    # atan2 在小角度下比 arccos 精确
    return math.atan2(normalized_det(t), cos_theta)


def triangle_angles(t: PointTriple) -> List[float]:
    """三角形 a1 a2 a3 的三个实角（升序）"""
    angles = []
    for vertex, left, right in ((t.a1, t.a2, t.a3), (t.a2, t.a1, t.a3), (t.a3, t.a1, t.a2)):
        u, v = left - vertex, right - vertex
        nu, nv = u.norm(), v.norm()
        # 2 atan2(‖‖u‖v - ‖v‖u‖, ‖‖u‖v + ‖v‖u‖)
        angles.append(2.0 * math.atan2((v.scale(nu) - u.scale(nv)).norm(), (v.scale(nu) + u.scale(nv)).norm()))
    return sorted(angles)


@dataclass(frozen=True)
class CanonicalFrame:
    """依赖 eps 的正交基 (e1, e2) 与参数：a2 = (eps, 0), a3 = (rho, delta·rho)"""
    e1: Complex2
    e2: Complex2
    eps: float
    rho: complex
    delta: complex

    def __post_init__(self):
        tol = GEOMETRY_CONFIG["frame_tol"]
        if abs(self.e1.norm() - 1.0) > tol or abs(self.e2.norm() - 1.0) > tol:
            raise DegenerateInputError("标架向量不是单位向量")
        if abs(hermitian_dot(self.e1, self.e2)) > tol:
            raise DegenerateInputError("标架向量不正交")
        if not self.eps > 0.0:
            raise DegenerateInputError(f"eps 必须为正：{self.eps}")
        object.__setattr__(self, "rho", complex(self.rho))
        object.__setattr__(self, "delta", complex(self.delta))
        if self.rho == 0:
            raise DegenerateInputError("rho = 0：a3 与 a2 正交，不是规范编号")

    @classmethod
    def from_parameters(cls, eps: float, rho: complex, delta: complex) -> "CanonicalFrame":
        """标准基下已对齐的标架"""
        return cls(Complex2(1, 0), Complex2(0, 1), float(eps), rho, delta)

    def points(self) -> List[Complex2]:
        """标架坐标下的三个极点 (0,0), (eps,0), (rho, delta·rho)"""
        return [ORIGIN, Complex2(self.eps, 0), Complex2(self.rho, self.delta * self.rho)]

    def frame_triple(self) -> PointTriple:
        return PointTriple(*self.points())

    def standard_triple(self) -> PointTriple:
        return PointTriple(*(from_frame(self, p) for p in self.points()))

    def alpha(self) -> np.ndarray:
        """alpha_ij := e_j · ē_i，即 e_j 的第 i 个标准坐标"""
        return np.array([[self.e1.c1, self.e2.c1], [self.e1.c2, self.e2.c2]], dtype=complex)

    @property
    def m(self) -> complex:
        """delta / (rho - eps)"""
        if self.rho == self.eps:
            raise DegenerateInputError("rho = eps")
        return self.delta / (self.rho - self.eps)

    def rho_within_half_eps(self) -> bool:
        return abs(self.rho) <= self.eps * (0.5 + GEOMETRY_CONFIG["rho_bound_slack"])


def _fix_phase(v: Complex2) -> Complex2:
    """让第一个非零标准坐标为正实数"""
    lead = v.c1 if abs(v.c1) > GEOMETRY_CONFIG["frame_tol"] else v.c2
    return v.scale(abs(lead) / lead)


def build_frame(t: PointTriple) -> CanonicalFrame:
    """e1 = a2/‖a2‖；e2 取 e1 在 ℂ² 中的（一维）正交补，相位按约定固定"""
    if normalized_det(t) < GEOMETRY_CONFIG["collinear_tol"]:
        raise CollinearTripleError("三点共线，delta 无定义")
    u, v, nu, _ = _arms(t)
    e1 = u.scale(1.0 / nu)
    e2 = _fix_phase(Complex2(-e1.c2.conjugate(), e1.c1.conjugate()))
    rho = hermitian_dot(v, e1)
    if rho == 0:
        raise DegenerateInputError("rho = 0：输入未规范化")
    delta = hermitian_dot(v, e2) / rho
    return CanonicalFrame(e1, e2, nu, rho, delta)


def to_frame(frame: CanonicalFrame, z: Complex2) -> Complex2:
    """z^eps_j = z · ē_j"""
    return Complex2(hermitian_dot(z, frame.e1), hermitian_dot(z, frame.e2))


def from_frame(frame: CanonicalFrame, w: Complex2) -> Complex2:
    """z = w1 e1 + w2 e2"""
    return frame.e1.scale(w.c1) + frame.e2.scale(w.c2)
