"""图模块"""
from .state import SweepState

__all__ = ["SweepState"]
