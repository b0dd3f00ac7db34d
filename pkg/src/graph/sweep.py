"""扫描流水线：classify -> evaluate -> diagnose"""
from typing import Literal

from langgraph.graph import END, StateGraph

from src.core.classify import classify_frames, sample_family
from src.harness.diagnostics import convergence_diagnostics
from src.harness.rows import SweepReport, build_tasks, evaluate_rows
from src.utils.log import get_logger
from .state import SweepState

logger = get_logger(__name__)


def classify_node(state: SweepState) -> dict:
    """采样标架并分类（只做一次）"""
    cfg = state["config"]
    spec = cfg.family.to_spec()
    schedule = cfg.schedule()
    sampled = sample_family(spec, schedule)
    frames = [f for _, f in sampled]
    classification = classify_frames(schedule, frames, spec.validation_flags())
    m = "" if classification.m is None else f"，m ≈ {classification.m:.6g}"
    logger.info("🔍 [classify] %s%s", classification.regime, m)
    return {"schedule": schedule, "frames": frames, "points": cfg.points(), "classification": classification}


def evaluate_node(state: SweepState) -> dict:
    """逐行求值所有界"""
    cfg = state["config"]
    tasks = build_tasks(state["schedule"], state["frames"], state["points"], state["classification"],
                        cfg.envelope_budget, cfg.seed, cfg.resolution, cfg.tolerances.pole_guard)
    logger.info("📐 [evaluate] %d 行，%d 个 worker", len(tasks), cfg.workers)
    rows = evaluate_rows(tasks, cfg.workers)
    return {"rows": rows}


def diagnose_node(state: SweepState) -> dict:
    report = SweepReport(state["rows"], state["classification"])
    diagnostics = convergence_diagnostics(report, state["config"].tolerances)
    status = "✅" if diagnostics["summary"]["passed"] else "⚠️ "
    logger.info("%s [diagnose] passed = %s", status, diagnostics["summary"]["passed"])
    return {"diagnostics": diagnostics}


def has_points(state: SweepState) -> Literal["evaluate", "end"]:
    """没有测试点时只输出分类"""
    return "evaluate" if state["points"] else "end"


def build_sweep_graph():
    """构建 LangGraph 图"""
    workflow = StateGraph(SweepState)

    workflow.add_node("classify", classify_node)
    workflow.add_node("evaluate", evaluate_node)
    workflow.add_node("diagnose", diagnose_node)

    workflow.set_entry_point("classify")
    workflow.add_conditional_edges(
        "classify",
        has_points,
        {
            "evaluate": "evaluate",
            "end": END,
        },
    )
    workflow.add_edge("evaluate", "diagnose")
    workflow.add_edge("diagnose", END)

    return workflow.compile()
