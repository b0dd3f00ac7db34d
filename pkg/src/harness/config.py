"""扫描配置模型（pydantic）：未知字段一律拒绝，数值覆盖按文档范围校验"""
import math
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import CLI_CONFIG, ENVELOPE_CONFIG, HARNESS_CONFIG, SUPNORM_CONFIG
from src.core.classify import FamilySpec
from src.core.cxgeom import CanonicalFrame, Complex2, PointTriple


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ComplexValue(StrictModel):
    re: float = 0.0
    im: float = 0.0

    def to_complex(self) -> complex:
        return complex(self.re, self.im)


class PointValue(StrictModel):
    c1: ComplexValue
    c2: ComplexValue

    def to_point(self) -> Complex2:
        return Complex2(self.c1.to_complex(), self.c2.to_complex())


class SampleValue(StrictModel):
    eps: float = Field(gt=0, lt=0.5)
    points: List[PointValue] = Field(min_length=3, max_length=3)


class FamilyConfig(StrictModel):
    """powerlaw：a3 = (c_rho eps^p_rho, c_delta eps^p_delta · c_rho eps^p_rho)；table：样本表"""
    kind: Literal["powerlaw", "table"] = "powerlaw"
    rho_coeff: ComplexValue = Field(default_factory=lambda: ComplexValue(re=0.5))
    rho_exp: float = Field(1.0, gt=0, le=10)
    delta_coeff: ComplexValue = Field(default_factory=lambda: ComplexValue(re=1.0))
    delta_exp: float = Field(1.0, ge=0, le=10)
    samples: List[SampleValue] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_table(self):
        if self.kind == "table":
            eps = [s.eps for s in self.samples]
            if len(eps) < 4:
                raise ValueError("样本表至少需要 4 个样本")
            if any(b >= a for a, b in zip(eps, eps[1:])):
                raise ValueError("样本表的 eps 必须严格递减")
        elif self.rho_coeff.to_complex() == 0 or self.delta_coeff.to_complex() == 0:
            raise ValueError("rho_coeff 与 delta_coeff 不能为 0")
        return self

    def to_spec(self) -> FamilySpec:
        if self.kind == "powerlaw":
            return FamilySpec.power_law(self.rho_coeff.to_complex(), self.rho_exp,
                                        self.delta_coeff.to_complex(), self.delta_exp)
        return FamilySpec.sample_table([
            (s.eps, PointTriple(*(p.to_point() for p in s.points))) for s in self.samples
        ])


class FrameConfig(StrictModel):
    """单个标架：a2 = (eps, 0)，a3 = (rho, delta·rho)"""
    eps: float = Field(gt=0, lt=0.5)
    rho: ComplexValue
    delta: ComplexValue

    def to_frame(self) -> CanonicalFrame:
        return CanonicalFrame.from_parameters(self.eps, self.rho.to_complex(), self.delta.to_complex())


class Tolerances(StrictModel):
    sandwich: float = Field(ENVELOPE_CONFIG["sandwich_tol"], gt=0, le=1e-3)
    envelope_band: float = Field(HARNESS_CONFIG["envelope_band"], gt=0, le=10)
    formula_band: float = Field(HARNESS_CONFIG["formula_band"], gt=0, le=1)
    liminf_band: float = Field(HARNESS_CONFIG["liminf_band"], gt=0, le=10)
    pole_guard: float = Field(HARNESS_CONFIG["pole_guard"], ge=0, le=1e-3)
    trend_soft: float = Field(HARNESS_CONFIG["trend_soft"], ge=0, le=1)
    trend_hard: float = Field(HARNESS_CONFIG["trend_hard"], ge=0, le=1)


class GridConfig(StrictModel):
    """[lo, hi]² 上 n×n 个实点"""
    lo: float = Field(0.2, gt=-1, lt=1)
    hi: float = Field(0.8, gt=-1, lt=1)
    n: int = Field(5, ge=1, le=50)

    def points(self) -> List[Complex2]:
        axis = np.linspace(self.lo, self.hi, self.n)
        return [Complex2(float(a), float(b)) for a in axis for b in axis]


def check_schedule(schedule: List[float]) -> List[float]:
    if len(schedule) < 4:
        raise ValueError("eps 序列至少需要 4 个点")
    if any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("eps 序列必须严格递减")
    if schedule[-1] <= 0 or schedule[0] >= 0.5:
        raise ValueError("eps 必须位于 (0, 0.5)")
    if math.log10(schedule[0] / schedule[-1]) < 3 - 1e-9:
        raise ValueError("eps 序列必须跨越至少 3 个数量级")
    return schedule


class SweepConfig(StrictModel):
    family: FamilyConfig = Field(default_factory=FamilyConfig)
    eps_schedule: Optional[List[float]] = None
    test_points: List[PointValue] = Field(default_factory=list)
    grid: Optional[GridConfig] = None
    envelope_budget: int = Field(ENVELOPE_CONFIG["budget"], ge=1, le=50)
    resolution: int = Field(SUPNORM_CONFIG["resolution"], ge=16, le=4096)
    seed: int = Field(ENVELOPE_CONFIG["seed"], ge=0, le=2 ** 32 - 1)
    workers: int = Field(HARNESS_CONFIG["workers"], ge=1, le=64)
    tolerances: Tolerances = Field(default_factory=Tolerances)

    @field_validator("test_points")
    @classmethod
    def _inside_bidisk(cls, points: List[PointValue]) -> List[PointValue]:
        for p in points:
            z = p.to_point()
            if abs(z.c1) >= 1 or abs(z.c2) >= 1:
                raise ValueError(f"测试点不在开双圆盘内：{z}")
        return points

    @model_validator(mode="after")
    def _check_consistency(self):
        check_schedule(self.schedule())
        guard = self.tolerances.pole_guard
        if self.family.kind == "powerlaw":
            for eps in self.schedule():
                rho = self.family.rho_coeff.to_complex() * eps ** self.family.rho_exp
                delta = self.family.delta_coeff.to_complex() * eps ** self.family.delta_exp
                poles = CanonicalFrame.from_parameters(eps, rho, delta).points()
                for z in self.points():
                    if min((z - p).norm() for p in poles) <= guard:
                        raise ValueError(f"测试点 {z} 在 eps = {eps} 时是极点")
        return self

    def schedule(self) -> List[float]:
        if self.eps_schedule is not None:
            return list(self.eps_schedule)
        if self.family.kind == "table":
            return [s.eps for s in self.family.samples]
        return list(CLI_CONFIG["default_schedule"])

    def points(self) -> List[Complex2]:
        points = [p.to_point() for p in self.test_points]
        if self.grid is not None:
            points += self.grid.points()
        return points


class CliConfig(StrictModel):
    """命令行覆盖项"""
    subcommand: Literal["classify", "generators", "bounds", "sweep", "verify", "runs"]
    seed: Optional[int] = Field(None, ge=0, le=2 ** 32 - 1)
    workers: Optional[int] = Field(None, ge=1, le=64)
    budget: Optional[int] = Field(None, ge=1, le=50)
    resolution: Optional[int] = Field(None, ge=16, le=4096)
    config_path: Optional[str] = None
    output: Optional[str] = None
    db_url: Optional[str] = None

    def sweep_overrides(self) -> dict:
        """非空的覆盖项，键名与 SweepConfig 对齐"""
        overrides = {} if self.seed is None else {"seed": self.seed}
        if self.workers is not None:
            overrides["workers"] = self.workers
        if self.budget is not None:
            overrides["envelope_budget"] = self.budget
        if self.resolution is not None:
            overrides["resolution"] = self.resolution
        return overrides
