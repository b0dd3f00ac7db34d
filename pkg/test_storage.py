"""测试扫描归档"""
import math

import pytest

from src.core.classify import COMPLETE_INTERSECTION, Classification
from src.core.cxgeom import Complex2
from src.harness.rows import ERROR, SweepReport, SweepRow
from src.storage import SweepRowRecord, SweepRun, get_db, init_db
from src.tools.archive_tools import archive_report, get_run, list_runs


@pytest.fixture
def db_url(tmp_path):
    return f"sqlite:///{tmp_path / 'archive.db'}"


def make_report() -> SweepReport:
    rows = [
        SweepRow(0, 0, 0.1, Complex2(0.5, 0.2), -1.5, -1.3, -1.4, -0.35, "ExactLimit", 0.1),
        SweepRow(0, 1, 0.1, Complex2(0.0, 0.0), -math.inf, -math.inf, -math.inf, -0.5, "ExactLimit", math.inf),
        SweepRow(1, 0, 0.01, Complex2(1.0, 0.2), kind=ERROR, error="OutOfDomainError: 不在开双圆盘内"),
    ]
    classification = Classification(COMPLETE_INTERSECTION, -2 + 0j, {"flags": []})
    diagnostics = {"summary": {"passed": True}}
    settings = {"family": {"kind": "PowerLaw"}, "seed": 7}
    return SweepReport(rows, classification, diagnostics, settings)


def test_session_commits_and_rolls_back(db_url):
    init_db(db_url)
    with get_db(db_url) as db:
        db.add(SweepRun(family="{}", regime="Inconclusive"))
    with pytest.raises(RuntimeError):
        with get_db(db_url) as db:
            db.add(SweepRun(family="{}", regime="Inconclusive"))
            db.flush()
            raise RuntimeError("boom")
    with get_db(db_url) as db:
        assert db.query(SweepRun).count() == 1


def test_archive_and_read_back(db_url):
    result = archive_report(make_report(), db_url, workers=2)
    assert result["status"] == "success"
    run = result["data"]
    assert run["regime"] == COMPLETE_INTERSECTION
    assert run["m"] == {"re": -2.0, "im": 0.0}
    assert run["seed"] == 7
    assert run["workers"] == 2
    assert run["passed"] == "true"
    assert run["rows"] == 3

    fetched = get_run(run["id"], db_url)
    assert fetched["status"] == "success"
    rows = fetched["data"]["rows"]
    assert [r["point_index"] for r in rows] == [0, 1, 0]
    assert rows[1]["lower"] == "-inf"
    assert rows[1]["gap"] == "inf"
    assert float(rows[0]["lower"]) == -1.5
    assert rows[2]["kind"] == ERROR
    assert rows[2]["lower"] is None
    assert rows[2]["error"].startswith("OutOfDomainError")
    assert fetched["data"]["summary"]["classification"]["regime"] == COMPLETE_INTERSECTION


def test_list_runs_newest_first(db_url):
    first = archive_report(make_report(), db_url)["data"]["id"]
    second = archive_report(make_report(), db_url)["data"]["id"]
    listed = list_runs(db_url)
    assert listed["status"] == "success"
    assert [r["id"] for r in listed["data"]] == [second, first]


def test_missing_run(db_url):
    result = get_run(99, db_url)
    assert result["status"] == "error"
    assert result["code"] == 2


def test_row_records_cascade(db_url):
    run_id = archive_report(make_report(), db_url)["data"]["id"]
    with get_db(db_url) as db:
        db.delete(db.get(SweepRun, run_id))
    with get_db(db_url) as db:
        assert db.query(SweepRowRecord).count() == 0
