"""数据库连接管理"""
import os
from contextlib import contextmanager
from typing import Dict, Optional

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session, sessionmaker

from config import DB_CONFIG
from .models import Base

# 默认数据库路径
DB_DIR = DB_CONFIG["db_dir"]
DB_PATH = os.path.join(DB_DIR, DB_CONFIG["db_name"])
DATABASE_URL = f"sqlite:///{DB_PATH}"

_engines: Dict[str, Engine] = {}
_sessions: Dict[str, sessionmaker] = {}


def get_engine(url: Optional[str] = None) -> Engine:
    """每个 URL 只创建一个引擎"""
    url = url or DATABASE_URL
    if url not in _engines:
        _engines[url] = create_engine(url, echo=False)
        _sessions[url] = sessionmaker(bind=_engines[url])
    return _engines[url]


def init_db(url: Optional[str] = None) -> None:
    """初始化数据库"""
    url = url or DATABASE_URL
    if url == DATABASE_URL:
        os.makedirs(DB_DIR, exist_ok=True)
    Base.metadata.create_all(bind=get_engine(url))


@contextmanager
def get_db(url: Optional[str] = None) -> Session:
    """获取数据库会话（上下文管理器）"""
    url = url or DATABASE_URL
    get_engine(url)
    db = _sessions[url]()
    try:
        yield db
        db.commit()
    except Exception:
        db.rollback()
        raise
    finally:
        db.close()
