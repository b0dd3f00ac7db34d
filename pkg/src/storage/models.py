"""数据库模型定义"""
import json
from datetime import datetime

from sqlalchemy import Column, DateTime, Float, ForeignKey, Integer, String, Text
from sqlalchemy.orm import declarative_base, relationship

Base = declarative_base()


class SweepRun(Base):
    """一次扫描"""
    __tablename__ = "sweep_runs"

    id = Column(Integer, primary_key=True, autoincrement=True)
    family = Column(Text, nullable=False)          # JSON
    regime = Column(String(50), nullable=False)
    m_re = Column(Float, nullable=True)
    m_im = Column(Float, nullable=True)
    seed = Column(Integer, nullable=False, default=0)
    workers = Column(Integer, nullable=False, default=1)
    passed = Column(String(10), nullable=True)     # true / false / skipped
    summary = Column(Text, nullable=True)          # JSON 摘要
    created_at = Column(DateTime, default=datetime.now)

    rows = relationship("SweepRowRecord", back_populates="run", cascade="all, delete-orphan",
                        order_by="SweepRowRecord.id")

    def to_dict(self):
        """转换为字典"""
        return {
            "id": self.id,
            "family": json.loads(self.family) if self.family else None,
            "regime": self.regime,
            "m": None if self.m_re is None else {"re": self.m_re, "im": self.m_im},
            "seed": self.seed,
            "workers": self.workers,
            "passed": self.passed,
            "rows": len(self.rows),
            "created_at": self.created_at.isoformat() if self.created_at else None,
        }


class SweepRowRecord(Base):
    """扫描中的一行；非有限值以字符串存储"""
    __tablename__ = "sweep_rows"

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(Integer, ForeignKey("sweep_runs.id"), nullable=False, index=True)
    eps_index = Column(Integer, nullable=False)
    point_index = Column(Integer, nullable=False)
    eps = Column(Float, nullable=False)
    z1_re = Column(Float, nullable=False)
    z1_im = Column(Float, nullable=False)
    z2_re = Column(Float, nullable=False)
    z2_im = Column(Float, nullable=False)
    lower = Column(String(40), nullable=True)
    upper_two_point = Column(String(40), nullable=True)
    upper_envelope = Column(String(40), nullable=True)
    exact_or_reference = Column(String(40), nullable=True)
    kind = Column(String(30), nullable=False)
    gap = Column(String(40), nullable=True)
    error = Column(Text, nullable=True)

    run = relationship("SweepRun", back_populates="rows")

    def to_dict(self):
        return {
            "eps_index": self.eps_index,
            "point_index": self.point_index,
            "eps": self.eps,
            "z": [self.z1_re, self.z1_im, self.z2_re, self.z2_im],
            "lower": self.lower,
            "upper_two_point": self.upper_two_point,
            "upper_envelope": self.upper_envelope,
            "exact_or_reference": self.exact_or_reference,
            "kind": self.kind,
            "gap": self.gap,
            "error": self.error or "",
        }
