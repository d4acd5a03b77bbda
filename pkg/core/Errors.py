"""
异常定义模块
恒等式不成立不是异常（以 IdentityReport 形式返回），这里只定义输入错误与计算失败
"""


class UmemuraError(Exception):
    """所有计算错误的基类"""


# ---------- 精确多项式 ----------

class NotDivisible(UmemuraError):
    """精确除法余式非零"""

    def __init__(self, remainder, message: str = None):
        self.remainder = remainder
        super().__init__(message or f"余式非零: {remainder}")


class DivisionByZero(UmemuraError, ZeroDivisionError):
    """除数为零多项式"""


class AnsatzInconsistent(UmemuraError):
    """部分分式线性方程组无解"""


# ---------- 组合 ----------

class NonIntegerCoefficient(UmemuraError):
    """d 系数不是正整数"""

    def __init__(self, subset, value):
        self.subset = subset
        self.value = value
        super().__init__(f"子集 {subset} 的 d 系数为 {value}")


class InvalidSymbol(UmemuraError):
    """Frobenius 符号不合法"""


class TooManyParts(UmemuraError):
    """分拆的行数超过 GL(n) 的秩"""


# ---------- 多项式族 ----------

class InvalidK(UmemuraError, ValueError):
    """k 超出 0 ≤ k ≤ n"""


class RecurrenceDivisionFailed(UmemuraError):
    """Toda 递推中的除法有余式"""

    def __init__(self, index: int, remainder):
        self.index = index
        self.remainder = remainder
        super().__init__(f"T_{index} 的递推除法余式非零: {remainder}")


# ---------- 数值验证 ----------

class BranchDomain(UmemuraError, ValueError):
    """t 不在实分支 t > 1 上"""


class PoleAtSample(UmemuraError):
    """多项式在采样点为零"""


class DifferentiationFailure(UmemuraError):
    """差分模板取到非有限值"""


class DegenerateDenominator(UmemuraError):
    """q_m 公式分母为零"""


class SingularSample(UmemuraError):
    """采样点处 q 落在奇点 {0, 1, t}"""
