"""扫描归档工具（SQLite / SQLAlchemy）"""
import json
from typing import Any, Dict, Optional

from src.harness.rows import SweepReport
from src.storage import SweepRowRecord, SweepRun, get_db, init_db
from src.utils.serialization import dumps_json, format_csv_float


def _text(x: Optional[float]) -> Optional[str]:
    """与 CSV 相同的文本形式，-inf 等非有限值也能落库"""
    return None if x is None else format_csv_float(x)


def archive_report(report: SweepReport, url: Optional[str] = None, workers: int = 1) -> Dict[str, Any]:
    """把一次扫描（摘要 + 全部行）写入数据库"""
    try:
        init_db(url)
        classification = report.classification
        summary = report.diagnostics.get("summary")
        passed = "skipped" if summary is None else str(bool(summary.get("passed"))).lower()
        with get_db(url) as db:
            run = SweepRun(
                family=dumps_json(report.settings.get("family", {})),
                regime=classification.regime,
                m_re=None if classification.m is None else classification.m.real,
                m_im=None if classification.m is None else classification.m.imag,
                seed=int(report.settings.get("seed", 0)),
                workers=workers,
                passed=passed,
                summary=dumps_json(report.to_record()),
            )
            for row in sorted(report.rows, key=lambda r: (r.eps_index, r.point_index)):
                run.rows.append(SweepRowRecord(
                    eps_index=row.eps_index,
                    point_index=row.point_index,
                    eps=row.eps,
                    z1_re=row.z.c1.real,
                    z1_im=row.z.c1.imag,
                    z2_re=row.z.c2.real,
                    z2_im=row.z.c2.imag,
                    lower=_text(row.lower),
                    upper_two_point=_text(row.upper_two_point),
                    upper_envelope=_text(row.upper_envelope),
                    exact_or_reference=_text(row.exact_or_reference),
                    kind=row.kind,
                    gap=_text(row.gap),
                    error=row.error or None,
                ))
            db.add(run)
            db.flush()
            return {
                "status": "success",
                "code": 0,
                "message": f"📦 已归档扫描 #{run.id}（{len(run.rows)} 行）",
                "data": run.to_dict(),
            }
    except Exception as e:
        return {"status": "error", "code": 3, "message": f"归档失败：{str(e)}", "data": None}


def list_runs(url: Optional[str] = None, limit: int = 20) -> Dict[str, Any]:
    """最近的扫描，新的在前"""
    try:
        init_db(url)
        with get_db(url) as db:
            runs = db.query(SweepRun).order_by(SweepRun.id.desc()).limit(limit).all()
            return {
                "status": "success",
                "code": 0,
                "message": f"共 {len(runs)} 条记录",
                "data": [r.to_dict() for r in runs],
            }
    except Exception as e:
        return {"status": "error", "code": 3, "message": f"查询失败：{str(e)}", "data": None}


def get_run(run_id: int, url: Optional[str] = None) -> Dict[str, Any]:
    """一次扫描的摘要与全部行"""
    try:
        init_db(url)
        with get_db(url) as db:
            run = db.query(SweepRun).filter(SweepRun.id == run_id).first()
            if not run:
                return {"status": "error", "code": 2, "message": f"未找到ID为 {run_id} 的扫描", "data": None}
            record = run.to_dict()
            record["summary"] = json.loads(run.summary) if run.summary else None
            record["rows"] = [r.to_dict() for r in run.rows]
            return {"status": "success", "code": 0, "message": f"扫描 #{run_id}", "data": record}
    except Exception as e:
        return {"status": "error", "code": 3, "message": f"查询失败：{str(e)}", "data": None}
