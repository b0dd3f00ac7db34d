"""异常定义"""


class PluriGreenError(Exception):
    """所有数值错误的基类"""

    exit_code = 3


class DegenerateInputError(PluriGreenError):
    """点重合、向量为零等退化输入"""


class CollinearTripleError(DegenerateInputError):
    """三点共线，delta 无定义"""


class ZeroPolynomialError(PluriGreenError):
    """零多项式无法归一化"""


class OutOfDomainError(PluriGreenError):
    """查询点不在开单位圆盘 / 双圆盘内"""


class NoAdmissibleDiskError(PluriGreenError):
    """没有任何候选圆盘通过校验"""


class SandwichViolationError(PluriGreenError):
    """上界低于下界：说明实现有 bug"""


class InsufficientDataError(PluriGreenError):
    """样本数不足以做趋势判断"""


class ConfigurationError(PluriGreenError):
    """配置错误"""

    exit_code = 2
