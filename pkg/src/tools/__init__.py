"""工具模块：命令工具与归档工具"""
from .archive_tools import archive_report, get_run, list_runs
from .command_tools import (
    classify_family,
    describe_generators,
    evaluate_bounds,
    load_config_file,
    sweep_to_files,
    verify_suite,
)

__all__ = [
    "classify_family",
    "describe_generators",
    "evaluate_bounds",
    "load_config_file",
    "sweep_to_files",
    "verify_suite",
    "archive_report",
    "list_runs",
    "get_run",
]
