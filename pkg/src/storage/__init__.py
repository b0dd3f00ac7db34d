"""存储模块"""
from .database import get_db, get_engine, init_db
from .models import SweepRowRecord, SweepRun

__all__ = ["init_db", "get_db", "get_engine", "SweepRun", "SweepRowRecord"]
