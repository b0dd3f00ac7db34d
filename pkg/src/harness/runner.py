"""run_sweep：执行扫描图并汇总为 SweepReport"""
from src.graph.sweep import build_sweep_graph
from src.utils.serialization import complex_to_record
from .config import SweepConfig
from .rows import SweepReport

_graph = None


def _get_graph():
    global _graph
    if _graph is None:
        _graph = build_sweep_graph()
    return _graph


def run_sweep(cfg: SweepConfig) -> SweepReport:
    """分类一次，逐 (eps, z) 求值所有界，最后做收敛诊断；给定 seed 时结果确定"""
    state = _get_graph().invoke({"config": cfg})
    settings = {
        "family": cfg.family.to_spec().describe(),
        "eps_schedule": state["schedule"],
        "points": [
            {"c1": complex_to_record(z.c1), "c2": complex_to_record(z.c2)} for z in state["points"]
        ],
        "envelope_budget": cfg.envelope_budget,
        "resolution": cfg.resolution,
        "seed": cfg.seed,
    }
    diagnostics = state.get("diagnostics", {"skipped": "no test points"})
    return SweepReport(state.get("rows", []), state["classification"], diagnostics, settings)
