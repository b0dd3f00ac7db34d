"""复数 / 浮点数的稳定序列化：JSON 用 re/im 对，CSV 用 17 位有效数字"""
import json
import math
from dataclasses import is_dataclass
from typing import Any

import numpy as np


def float_to_json(x: float):
    """有限值原样保留；非有限值写成字符串 "-inf" / "inf" / "nan" """
    x = float(x)
    if math.isfinite(x):
        return x
    if math.isnan(x):
        return "nan"
    return "inf" if x > 0 else "-inf"


def complex_to_record(c: complex) -> dict:
    c = complex(c)
    return {"re": float_to_json(c.real), "im": float_to_json(c.imag)}


def complex_from_record(record) -> complex:
    """接受 {"re", "im"} 或 [re, im]"""
    if isinstance(record, dict):
        return complex(float(record["re"]), float(record.get("im", 0.0)))
    re, im = record
    return complex(float(re), float(im))


def to_jsonable(obj: Any) -> Any:
    """递归转换为 JSON 原生结构"""
    if hasattr(obj, "to_record"):
        return to_jsonable(obj.to_record())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float_to_json(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_to_record(obj)
    if is_dataclass(obj):
        raise TypeError(f"{type(obj).__name__} 没有 to_record()")
    return obj


def dumps_json(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), ensure_ascii=False, indent=2, allow_nan=False)


def format_csv_float(x) -> str:
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"
