"""复系数二元多项式：算术、求值、Taylor 截断、单位双圆盘上的带证书上确界范数"""
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Tuple, Union

import numpy as np

from config import SUPNORM_CONFIG
from .cxgeom import Complex2
from .errors import ZeroPolynomialError

Exponent = Tuple[int, int]
Scalar = Union[int, float, complex]


@dataclass(frozen=True)
class BiPoly:
    """稀疏指数表 {(j, k): a_jk}，表示 Σ a_jk z1^j z2^k；不存储零系数"""
    coefficients: Mapping[Exponent, complex] = field(default_factory=dict)

    def __post_init__(self):
        normal: Dict[Exponent, complex] = {}
        for (j, k), value in self.coefficients.items():
            if j < 0 or k < 0:
                raise ValueError(f"指数必须非负：({j}, {k})")
            value = complex(value)
            if value != 0:
                normal[(int(j), int(k))] = value
        object.__setattr__(self, "coefficients", dict(sorted(normal.items())))

    @classmethod
    def constant(cls, c: Scalar) -> "BiPoly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, j: int, k: int, c: Scalar = 1) -> "BiPoly":
        return cls({(j, k): c})

    @property
    def total_degree(self) -> int:
        return max((j + k for j, k in self.coefficients), default=0)

    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient(self, j: int, k: int) -> complex:
        return self.coefficients.get((j, k), 0j)

    def l1_norm(self) -> float:
        """Σ|a_jk|"""
        return float(sum(abs(c) for c in self.coefficients.values()))

    def gradient_bound(self) -> float:
        """L = Σ|a_jk|(j + k)，环面上关于相位的 Lipschitz 常数"""
        return float(sum(abs(c) * (j + k) for (j, k), c in self.coefficients.items()))

    def __add__(self, other: "BiPoly") -> "BiPoly":
        return add(self, other)

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return add(self, scale(other, -1))

    def __neg__(self) -> "BiPoly":
        return scale(self, -1)

    def __mul__(self, other: Union["BiPoly", Scalar]) -> "BiPoly":
        if isinstance(other, BiPoly):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BiPoly":
        result = BiPoly.constant(1)
        for _ in range(n):
            result = mul(result, self)
        return result

    def __call__(self, z: Complex2) -> complex:
        return eval_poly(self, z)

    def to_records(self) -> List[dict]:
        return [{"j": j, "k": k, "re": c.real, "im": c.imag}
                for (j, k), c in self.coefficients.items()]

    @classmethod
    def from_records(cls, records: Iterable[Mapping]) -> "BiPoly":
        table: Dict[Exponent, complex] = {}
        for r in records:
            key = (int(r["j"]), int(r["k"]))
            table[key] = table.get(key, 0j) + complex(float(r["re"]), float(r["im"]))
        return cls(table)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for (j, k), c in self.coefficients.items():
            mono = "".join(s for s in (_power("z1", j), _power("z2", k)) if s)
            terms.append(f"({c:.6g}){mono}" if mono else f"({c:.6g})")
        return " + ".join(terms)


def _power(name: str, e: int) -> str:
    if e == 0:
        return ""
    return name if e == 1 else f"{name}^{e}"


# 常用变量
Z1 = BiPoly.monomial(1, 0)
Z2 = BiPoly.monomial(0, 1)
ONE = BiPoly.constant(1)


def eval_poly(p: BiPoly, z: Complex2) -> complex:
    """Horner 求值：先按 z2 的幂合并，再对 z1 做 Horner"""
    if p.is_zero():
        return 0j
    rows: Dict[int, Dict[int, complex]] = {}
    for (j, k), c in p.coefficients.items():
        rows.setdefault(j, {})[k] = c
    acc = 0j
    for j in range(max(rows), -1, -1):
        row = rows.get(j)
        inner = 0j
        if row:
            for k in range(max(row), -1, -1):
                inner = inner * z.c2 + row.get(k, 0j)
        acc = acc * z.c1 + inner
    return acc


def add(p: BiPoly, q: BiPoly) -> BiPoly:
    table = dict(p.coefficients)
    for key, c in q.coefficients.items():
        table[key] = table.get(key, 0j) + c
    return BiPoly(table)


def scale(p: BiPoly, s: Scalar) -> BiPoly:
    return BiPoly({key: s * c for key, c in p.coefficients.items()})


def mul(p: BiPoly, q: BiPoly) -> BiPoly:
    table: Dict[Exponent, complex] = {}
    for (j1, k1), a in p.coefficients.items():
        for (j2, k2), b in q.coefficients.items():
            key = (j1 + j2, k1 + k2)
            table[key] = table.get(key, 0j) + a * b
    return BiPoly(table)


def truncate(p: BiPoly, m: int) -> Tuple[BiPoly, BiPoly]:
    """f = P_m(f) + R_{m+1}：返回 (总次数 <= m 的部分, 余项)"""
    if m < 0:
        raise ValueError("m 必须非负")
    head = {key: c for key, c in p.coefficients.items() if sum(key) <= m}
    tail = {key: c for key, c in p.coefficients.items() if sum(key) > m}
    return BiPoly(head), BiPoly(tail)


def partial(p: BiPoly, variable: int) -> BiPoly:
    """对 z1 (variable=1) 或 z2 (variable=2) 求偏导"""
    table: Dict[Exponent, complex] = {}
    for (j, k), c in p.coefficients.items():
        if variable == 1 and j > 0:
            table[(j - 1, k)] = c * j
        elif variable == 2 and k > 0:
            table[(j, k - 1)] = c * k
    return BiPoly(table)


def compose_linear(p: BiPoly, a11: complex, a12: complex, a21: complex, a22: complex) -> BiPoly:
    """代入 z1 -> a11 z1 + a12 z2, z2 -> a21 z1 + a22 z2"""
    w1 = BiPoly({(1, 0): a11, (0, 1): a12})
    w2 = BiPoly({(1, 0): a21, (0, 1): a22})
    result = BiPoly()
    for (j, k), c in p.coefficients.items():
        result = add(result, scale(mul(w1 ** j, w2 ** k), c))
    return result


def coefficient_distance(p: BiPoly, q: BiPoly) -> float:
    """系数差的 ℓ1 范数"""
    return (p - q).l1_norm()


@dataclass(frozen=True)
class SupNormResult:
    """sup 在 [value, value + uncertainty] 之间；lower_witness 是达到 value 的环面点"""
    value: float
    lower_witness: Complex2
    uncertainty: float
    resolution: int

    @property
    def certified_upper(self) -> float:
        return self.value + self.uncertainty

    def to_record(self) -> dict:
        w = self.lower_witness
        return {
            "value": self.value,
            "uncertainty": self.uncertainty,
            "resolution": self.resolution,
            "witness": [w.c1.real, w.c1.imag, w.c2.real, w.c2.imag],
        }


def _certified_upper(p: BiPoly, moduli: np.ndarray) -> float:
    """Σ|a_jk| 与各二进子网格上的 max + L·π√2/m 取小；子网格嵌套，分辨率加倍时上界不增"""
    lipschitz = p.gradient_bound() * math.pi * math.sqrt(2.0)
    bound = p.l1_norm()
    step, m = 1, moduli.shape[0]
    while True:
        bound = min(bound, float(moduli[::step, ::step].max()) + lipschitz / m)
        if m % 2 or m // 2 < SUPNORM_CONFIG["min_resolution"]:
            return bound
        step, m = step * 2, m // 2


def sup_norm_bidisk(p: BiPoly, resolution: int = None) -> SupNormResult:
    """环面 N×N 相位网格采样（二维 FFT），value + uncertainty 为 _certified_upper 给出的严格上界

    最大模原理：闭双圆盘上的上确界在环面 |z1| = |z2| = 1 上达到。
    """
    n = SUPNORM_CONFIG["resolution"] if resolution is None else int(resolution)
    if n < SUPNORM_CONFIG["min_resolution"]:
        raise ValueError(f"分辨率至少为 {SUPNORM_CONFIG['min_resolution']}：{n}")
    if p.is_zero():
        raise ZeroPolynomialError("零多项式没有可归一化的范数")
    degree_1 = max(j for j, _ in p.coefficients)
    degree_2 = max(k for _, k in p.coefficients)
    if max(degree_1, degree_2) >= n:
        raise ValueError("分辨率必须大于各变量的次数")

    table = np.zeros((n, n), dtype=complex)
    for (j, k), c in p.coefficients.items():
        table[j, k] = c
    # values[a, b] = Σ a_jk exp(2πi (j a + k b) / N)
    values = np.fft.ifft2(table) * (n * n)
    moduli = np.abs(values)
    flat = int(np.argmax(moduli))  # 平局取最小网格下标
    a, b = divmod(flat, n)
    witness = Complex2(np.exp(2j * np.pi * a / n), np.exp(2j * np.pi * b / n))
    value = float(abs(eval_poly(p, witness)))
    uncertainty = max(0.0, _certified_upper(p, moduli) - value)
    return SupNormResult(value=value, lower_witness=witness, uncertainty=uncertainty, resolution=n)
