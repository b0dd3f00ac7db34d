"""报告输出：CSV（每行一个 (eps, z)）与 JSON 摘要，均原子写入"""
import csv
import io
import json
import os
import tempfile
from typing import List

from src.utils.serialization import dumps_json, format_csv_float
from .rows import SweepReport, SweepRow

CSV_COLUMNS = [
    "eps", "z1_re", "z1_im", "z2_re", "z2_im",
    "lower", "upper_two_point", "upper_envelope", "exact_or_reference", "kind", "gap",
]


def csv_fields(row: SweepRow) -> List[str]:
    z = row.z
    numbers = [row.eps, z.c1.real, z.c1.imag, z.c2.real, z.c2.imag,
               row.lower, row.upper_two_point, row.upper_envelope, row.exact_or_reference]
    return [format_csv_float(x) for x in numbers] + [row.kind, format_csv_float(row.gap)]


def report_to_csv(report: SweepReport) -> str:
    """按 (eps 下标, 点下标) 排序输出"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in sorted(report.rows, key=lambda r: (r.eps_index, r.point_index)):
        writer.writerow(csv_fields(row))
    return buffer.getvalue()


def report_to_json(report: SweepReport) -> str:
    return dumps_json(report)


def write_atomic(path: str, text: str) -> None:
    """先写临时文件再替换，失败时不留下半截文件"""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def write_report(report: SweepReport, csv_path: str, json_path: str) -> None:
    csv_text, json_text = report_to_csv(report), report_to_json(report)
    write_atomic(csv_path, csv_text)
    write_atomic(json_path, json_text)


def load_json(path: str) -> dict:
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)
