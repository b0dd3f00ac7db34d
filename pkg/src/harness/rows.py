"""扫描行：每个 (eps 下标, 点下标) 一行，行之间相互独立"""
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Optional, Sequence

from src.core.classify import Classification
from src.core.cxgeom import CanonicalFrame, Complex2
from src.core.errors import PluriGreenError
from src.core.green import exact_limit, lower_bound_best, upper_bound_disk_envelope, upper_bound_two_point
from src.utils.log import get_logger
from src.utils.serialization import float_to_json

logger = get_logger(__name__)

POLE = "pole"
ERROR = "error"


@dataclass(frozen=True)
class SweepRow:
    eps_index: int
    point_index: int
    eps: float
    z: Complex2
    lower: Optional[float] = None
    upper_two_point: Optional[float] = None
    upper_envelope: Optional[float] = None
    exact_or_reference: Optional[float] = None
    kind: str = ERROR
    gap: Optional[float] = None
    lower_certificate: str = ""
    envelope_family: str = ""
    error: str = ""

    @property
    def evaluated(self) -> bool:
        return self.kind not in (POLE, ERROR)

    def sandwich_ok(self, tol: float) -> bool:
        if not self.evaluated:
            return True
        return self.lower <= min(self.upper_two_point, self.upper_envelope) + tol

    def to_record(self) -> dict:
        def num(x):
            return None if x is None else float_to_json(x)
        return {
            "eps_index": self.eps_index,
            "point_index": self.point_index,
            "eps": self.eps,
            "z": [self.z.c1.real, self.z.c1.imag, self.z.c2.real, self.z.c2.imag],
            "lower": num(self.lower),
            "upper_two_point": num(self.upper_two_point),
            "upper_envelope": num(self.upper_envelope),
            "exact_or_reference": num(self.exact_or_reference),
            "kind": self.kind,
            "gap": num(self.gap),
            "lower_certificate": self.lower_certificate,
            "envelope_family": self.envelope_family,
            "error": self.error,
        }


@dataclass
class SweepReport:
    rows: List[SweepRow]
    classification: Classification
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    settings: Dict[str, Any] = field(default_factory=dict)

    def point_rows(self) -> Dict[int, List[SweepRow]]:
        """按点分组，组内按 eps 下标排序"""
        groups: Dict[int, List[SweepRow]] = {}
        for row in sorted(self.rows, key=lambda r: (r.point_index, r.eps_index)):
            groups.setdefault(row.point_index, []).append(row)
        return groups

    def to_record(self) -> dict:
        """JSON 摘要（行数据写在 CSV 中）"""
        return {
            "settings": self.settings,
            "classification": self.classification.to_record(),
            "diagnostics": self.diagnostics,
            "rows": len(self.rows),
        }


class RowTask(NamedTuple):
    eps_index: int
    point_index: int
    eps: float
    frame: CanonicalFrame
    z: Complex2
    classification: Classification
    budget: int
    seed: int
    resolution: int
    pole_guard: float


def build_tasks(schedule: Sequence[float], frames: Sequence[CanonicalFrame], points: Sequence[Complex2],
                classification: Classification, budget: int, seed: int, resolution: int,
                pole_guard: float) -> List[RowTask]:
    """按 (eps 下标, 点下标) 排序的任务列表"""
    return [
        RowTask(i, j, eps, frame, z, classification, budget, seed, resolution, pole_guard)
        for i, (eps, frame) in enumerate(zip(schedule, frames))
        for j, z in enumerate(points)
    ]


def evaluate_row(task: RowTask) -> SweepRow:
    """单行求值；数值异常写入行内错误标记，不向外抛出"""
    base = dict(eps_index=task.eps_index, point_index=task.point_index, eps=task.eps, z=task.z)
    if min((task.z - p).norm() for p in task.frame.points()) < task.pole_guard:
        return SweepRow(**base, kind=POLE)
    try:
        lower = lower_bound_best(task.z, task.frame, task.resolution)
        two = upper_bound_two_point(task.z, task.frame.eps)
        envelope = upper_bound_disk_envelope(task.z, task.frame, task.budget, task.seed, lower=lower)
        reference = exact_limit(task.z, task.classification)
    except PluriGreenError as exc:
        logger.warning("❌ 行 (%d, %d) 失败：%s", task.eps_index, task.point_index, exc)
        return SweepRow(**base, kind=ERROR, error=f"{type(exc).__name__}: {exc}")
    gap = math.inf if lower.value == -math.inf else envelope.value - lower.value
    return SweepRow(
        **base,
        lower=lower.value,
        upper_two_point=two.value,
        upper_envelope=envelope.value,
        exact_or_reference=reference.value,
        kind=reference.kind,
        gap=gap,
        lower_certificate=lower.certificate.get("polynomial", ""),
        envelope_family=envelope.certificate.get("family", envelope.certificate.get("formula", "")),
    )


def evaluate_rows(tasks: Sequence[RowTask], workers: int = 1) -> List[SweepRow]:
    """有序 map：结果顺序与任务顺序一致，与 worker 数无关"""
    if workers <= 1 or len(tasks) <= 1:
        return [evaluate_row(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate_row, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
