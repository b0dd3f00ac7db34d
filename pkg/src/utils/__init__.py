"""工具模块"""
from .log import configure, get_logger
from .serialization import complex_from_record, complex_to_record, dumps_json, format_csv_float

__all__ = [
    "configure",
    "get_logger",
    "complex_from_record",
    "complex_to_record",
    "dumps_json",
    "format_csv_float",
]
