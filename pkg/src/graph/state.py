"""图状态定义"""
from typing import Any, Dict, List, TypedDict

from src.core.classify import Classification
from src.core.cxgeom import CanonicalFrame, Complex2
from src.harness.config import SweepConfig
from src.harness.rows import SweepRow


class SweepState(TypedDict, total=False):
    """扫描流水线状态：各节点只返回自己更新的字段"""
    config: SweepConfig
    schedule: List[float]
    frames: List[CanonicalFrame]
    points: List[Complex2]
    classification: Classification
    rows: List[SweepRow]
    diagnostics: Dict[str, Any]
