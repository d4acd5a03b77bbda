"""
组合模块
基础集 [n;m]、子集系数 d_{n,m}(I) 与符号指数 c(I)、元素和权重，
以及显式公式所需的分拆、Frobenius 符号与 GL(n) 的 Weyl 维数公式
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Tuple

from sympy.polys.domains import QQ

from core.Errors import InvalidSymbol, NonIntegerCoefficient, TooManyParts


@dataclass(frozen=True)
class GroundSet:
    """[n;m] = {1,…,n} ∪ {n+2, n+4, …, n+2m}"""
    n: int
    m: int
    elements: Tuple[int, ...]

    @property
    def weight(self) -> int:
        return sum(self.elements)

    def subset(self, members: Iterable[int]) -> "IndexSubset":
        members = tuple(sorted(set(members)))
        extra = set(members) - set(self.elements)
        if extra:
            raise ValueError(f"{sorted(extra)} 不属于 [{self.n};{self.m}]")
        return IndexSubset(self, members)

    def full(self) -> "IndexSubset":
        return IndexSubset(self, self.elements)

    def index_subsets(self) -> Iterator["IndexSubset"]:
        """按位掩码升序枚举全部子集（第 i 位对应第 i 小的元素）"""
        size = len(self.elements)
        for mask in range(1 << size):
            yield IndexSubset(self, tuple(e for bit, e in enumerate(self.elements) if mask >> bit & 1))


@dataclass(frozen=True)
class IndexSubset:
    ground: GroundSet
    members: Tuple[int, ...]

    @property
    def complement(self) -> Tuple[int, ...]:
        chosen = set(self.members)
        return tuple(e for e in self.ground.elements if e not in chosen)

    @property
    def weight(self) -> int:
        return sum(self.members)

    def __str__(self) -> str:
        return str(list(self.members))


@lru_cache(maxsize=None)
def ground_set(n: int, m: int) -> GroundSet:
    if n < 0 or m < 0:
        raise ValueError(f"n, m 必须非负: n={n}, m={m}")
    return GroundSet(n, m, tuple(range(1, n + 1)) + tuple(n + 2 * j for j in range(1, m + 1)))


def weight(values: Iterable[int]) -> int:
    """元素和 |I|（不是基数）"""
    return sum(values)


def dcoef(I: IndexSubset) -> QQ.dtype:
    """
    d_{n,m}(I) = ∏_{i∈I, j∉I} |(i+j)/(i-j)|

    Raises:
        NonIntegerCoefficient: 结果不是正整数
    """
    value = QQ.one
    for i in I.members:
        for j in I.complement:
            value *= abs(QQ(i + j, i - j))
    if value.denominator != 1 or value <= 0:
        raise NonIntegerCoefficient(I, value)
    return value


def csign_exponent(I: IndexSubset) -> int:
    """c(I) = Σ_{i∈I, i>n} (i-n)/2"""
    n = I.ground.n
    return sum((i - n) // 2 for i in I.members if i > n)


def single_sign_exponent(i: int, n: int) -> int:
    """c({i})：i ≤ n 时为 0，否则 (i-n)/2"""
    return (i - n) // 2 if i > n else 0


# ---------------------------------------------------------------------------
# 分拆与 Frobenius 符号
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Partition:
    parts: Tuple[int, ...]

    def __post_init__(self):
        parts = tuple(p for p in self.parts if p)
        if any(p < 0 for p in parts) or list(parts) != sorted(parts, reverse=True):
            raise ValueError(f"不是分拆: {self.parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def part(self, i: int) -> int:
        """第 i 行长度（1 起算），越界为 0"""
        return self.parts[i - 1] if i <= len(self.parts) else 0

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p >= j) for j in range(1, self.parts[0] + 1)))


@dataclass(frozen=True)
class FrobeniusSymbol:
    arms: Tuple[int, ...]
    legs: Tuple[int, ...]

    def __post_init__(self):
        if len(self.arms) != len(self.legs):
            raise InvalidSymbol(f"arms 与 legs 长度不同: {self}")
        for seq in (self.arms, self.legs):
            if any(x < 0 for x in seq) or any(x <= y for x, y in zip(seq, seq[1:])):
                raise InvalidSymbol(f"需要严格递减的非负整数: {self}")

    def __str__(self) -> str:
        return f"({','.join(map(str, self.arms))}|{','.join(map(str, self.legs))})"


def partition_to_frobenius(shape: Partition) -> FrobeniusSymbol:
    rank = sum(1 for i, p in enumerate(shape.parts, start=1) if p >= i)
    columns = shape.conjugate()
    return FrobeniusSymbol(tuple(shape.part(i) - i for i in range(1, rank + 1)),
                           tuple(columns.part(i) - i for i in range(1, rank + 1)))


def frobenius_to_partition(symbol: FrobeniusSymbol) -> Partition:
    """
    λ_i = a_i + i (i ≤ p)，第 i > p 行长度为 #{j : b_j + j ≥ i}

    Raises:
        InvalidSymbol: 得不到与符号一致的 Young 图
    """
    rank = len(symbol.arms)
    rows = [a + i for i, a in enumerate(symbol.arms, start=1)]
    height = max((b + j for j, b in enumerate(symbol.legs, start=1)), default=0)
    for i in range(rank + 1, height + 1):
        rows.append(sum(1 for j, b in enumerate(symbol.legs, start=1) if b + j >= i))
    try:
        shape = Partition(tuple(rows))
    except ValueError as e:
        raise InvalidSymbol(f"{symbol}: {e}") from e
    if partition_to_frobenius(shape) != symbol:
        raise InvalidSymbol(f"{symbol} 不对应任何 Young 图")
    return shape


def lambda_of_subset(I: Iterable[int], n: int) -> Partition:
    """λ(I) = (i_1, …, i_p | i_1-1, …, i_p-1)，I ⊆ [n-1]"""
    members = sorted(I, reverse=True)
    if any(i < 1 or i > n - 1 for i in members):
        raise ValueError(f"{members} 不是 [{n - 1}] 的子集")
    return frobenius_to_partition(FrobeniusSymbol(tuple(members), tuple(i - 1 for i in members)))


def gl_dim(n: int, shape: Partition) -> int:
    """
    GL(n) 不可约表示的维数（Weyl 维数公式）

    ∏_{1≤i<j≤n} (λ_i - λ_j + j - i) / (j - i)

    Raises:
        TooManyParts: λ 的行数超过 n
    """
    if len(shape) > n:
        raise TooManyParts(f"{shape.parts} 的行数超过 {n}")
    value = QQ.one
    for i, j in combinations(range(1, n + 1), 2):
        value *= QQ(shape.part(i) - shape.part(j) + j - i, j - i)
    assert value.denominator == 1 and value > 0, f"维数不是正整数: {value}"
    return int(value)
