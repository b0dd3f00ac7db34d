"""日志：诊断信息统一写到 stderr，数据只写 stdout / 输出文件"""
import logging
import sys

_configured = False


class _StderrHandler(logging.StreamHandler):
    """写入时才取 sys.stderr，重定向之后仍然有效"""

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value):
        pass


def configure(level: int = logging.INFO) -> None:
    """只配置一次根 logger 'src'"""
    global _configured
    root = logging.getLogger("src")
    if not _configured:
        handler = _StderrHandler()
        handler.setFormatter(logging.Formatter("%(message)s"))
        root.addHandler(handler)
        root.propagate = False
        _configured = True
    root.setLevel(level)


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)
