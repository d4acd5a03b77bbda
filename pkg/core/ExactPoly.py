"""
精确多项式运算模块
多项式载体为 sympy 稀疏多项式环 (PolyElement)，系数域为有理数 QQ。
提供商环约化 w^2 = z^2 + 1、导子 delta、二阶 Hirota 导数、精确除法、
环同态代换，以及一元有理函数 URat 与部分分式分解。
"""
from dataclasses import dataclass
from functools import lru_cache, reduce
from math import lcm
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import sympy
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement, ring

from core.Errors import AnsatzInconsistent, DivisionByZero, NotDivisible

Rational = QQ.dtype
MPoly = PolyElement

# 主环，变量顺序 (z, w, a, b)
ZW, Z, W, A, B = ring("z,w,a,b", QQ)

# Toda 递推所用的环，B1 = b1^2, B2 = b2^2
TODA, V, B1, B2 = ring("v,B1,B2", QQ)

# b1 平移恒等式所用的环 (z, w, b1, b2)
PB, PZ, PW, P1, P2 = ring("z,w,b1,b2", QQ)

X_SYMBOL = sympy.Symbol("x")


def qq(value) -> Rational:
    """
    把 int / "n/d" 字符串 / sympy.Rational / QQ 元素转为 QQ 元素

    Raises:
        TypeError: 浮点数（精确计算中不接受）
    """
    if isinstance(value, float):
        raise TypeError(f"拒绝浮点系数: {value!r}")
    if isinstance(value, str):
        return QQ.from_sympy(sympy.Rational(value))
    if isinstance(value, sympy.Rational):
        return QQ(int(value.p), int(value.q))
    return QQ(int(value.numerator), int(value.denominator))


def to_sympy(value) -> sympy.Rational:
    """QQ 元素转为 sympy.Rational"""
    value = qq(value)
    return sympy.Rational(int(value.numerator), int(value.denominator))


def from_terms(terms: Mapping[Tuple[int, ...], Rational], target=ZW) -> MPoly:
    """由 {指数元组: 系数} 构造多项式，零系数自动丢弃"""
    return target.from_dict({tuple(exps): qq(c) for exps, c in terms.items()})


def poly_arith(p: MPoly, q: Optional[MPoly], op: str, scalar: Rational = None) -> MPoly:
    """
    环运算入口

    Args:
        p, q: 同一环中的多项式（scale 时忽略 q）
        op: add / sub / mul / scale
        scalar: scale 的有理数因子
    """
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "scale":
        return p * qq(scalar)
    raise ValueError(f"未知运算: {op}")


def total_degree(p: MPoly) -> int:
    """全次数，零多项式返回 -1"""
    return max((sum(monom) for monom in p.itermonoms()), default=-1)


def zw_degree(p: MPoly) -> int:
    """关于前两个变量 (z, w) 的次数"""
    return max((monom[0] + monom[1] for monom in p.itermonoms()), default=-1)


def common_denominator(p: MPoly) -> int:
    """所有系数分母的最小公倍数"""
    return lcm(1, *(int(c.denominator) for c in p.itercoeffs()))


def reduce_mod_relation(p: MPoly) -> MPoly:
    """
    约化到商环 R[z,w]/(w^2 - z^2 - 1) 的标准形：w 的次数 ≤ 1

    w^e 改写为 w^(e mod 2) (z^2 + 1)^(e div 2)，适用于前两个变量为 z, w 的任意环。
    """
    target = p.ring
    z = target.gens[0]
    lift = z ** 2 + 1
    lift_powers = {0: target.one}
    result = target.zero
    for monom, coeff in p.terms():
        half, rest = divmod(monom[1], 2)
        if half not in lift_powers:
            lift_powers[half] = lift ** half
        base = (monom[0], rest) + tuple(monom[2:])
        result = result + target.term_new(base, coeff) * lift_powers[half]
    return result


def delta(p: MPoly) -> MPoly:
    """导子 δ = (w ∂z + z ∂w) / 2，即 d/dx 在 z(x), w(x) 上的实现"""
    z, w = p.ring.gens[0], p.ring.gens[1]
    return (w * p.diff(z) + z * p.diff(w)) * QQ(1, 2)


def hirota2(f: MPoly, g: MPoly) -> MPoly:
    """二阶 Hirota 导数 D_x^2 f∘g = f''g - 2f'g' + fg''"""
    df, dg = delta(f), delta(g)
    return delta(df) * g - df * dg * 2 + f * delta(dg)


def exact_div(p: MPoly, q: MPoly) -> MPoly:
    """精确除法；余式非零时抛出 NotDivisible（携带余式）"""
    if not q:
        raise DivisionByZero("除数为零多项式")
    quotient, remainder = p.div(q)
    if remainder:
        raise NotDivisible(remainder)
    return quotient


def proportionality(p: MPoly, q: MPoly) -> Optional[Rational]:
    """若 p = c·q（c 为有理常数）返回 c，否则返回 None"""
    if not q:
        return None
    monom, coeff = next(iter(q.items()))
    ratio = p.get(monom, QQ(0)) / coeff
    if p == q * ratio:
        return ratio
    return None


def substitute(p: MPoly, images: Sequence[MPoly], target, squared: Iterable[int] = ()) -> MPoly:
    """
    环同态代换：第 i 个变量映为 images[i]（target 中的多项式）

    Args:
        squared: 这些位置的 images 表示变量的平方，要求对应指数全为偶数
    """
    squared = set(squared)
    cache = [dict() for _ in images]
    result = target.zero
    for monom, coeff in p.terms():
        term = target.ground_new(coeff)
        for index, exponent in enumerate(monom):
            if not exponent:
                continue
            if index in squared:
                if exponent % 2:
                    raise ValueError(f"变量 {p.ring.symbols[index]} 出现奇次幂，无法按平方代换")
                exponent //= 2
            if exponent not in cache[index]:
                cache[index][exponent] = images[index] ** exponent
            term = term * cache[index][exponent]
        result = result + term
    return result


def specialize(p: MPoly, a=None, b=None) -> MPoly:
    """在 ZW 内代换参数 a, b（取有理数或 ZW 中的多项式）"""
    def image(value, default):
        if value is None:
            return default
        if isinstance(value, PolyElement):
            return value
        return ZW.ground_new(qq(value))

    return substitute(p, [Z, W, image(a, A), image(b, B)], ZW)


# ---------------------------------------------------------------------------
# 一元有理函数与部分分式
# ---------------------------------------------------------------------------

def _upoly(expr) -> sympy.Poly:
    return sympy.Poly(expr, X_SYMBOL, domain=QQ)


@dataclass(frozen=True)
class URat:
    """一元有理函数 num/den，约分后分母首一"""
    num: sympy.Poly
    den: sympy.Poly

    @classmethod
    def of(cls, num, den) -> "URat":
        num, den = _upoly(num), _upoly(den)
        if den.is_zero:
            raise DivisionByZero("有理函数分母为零")
        if num.is_zero:
            return cls(_upoly(0), _upoly(1))
        common = num.gcd(den)
        num, den = num.exquo(common), den.exquo(common)
        lead = den.LC()
        return cls(num.quo_ground(lead), den.monic())

    @classmethod
    def const(cls, value) -> "URat":
        return cls.of(to_sympy(value), 1)

    def __add__(self, other: "URat") -> "URat":
        return URat.of(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "URat") -> "URat":
        return URat.of(self.num * other.den - other.num * self.den, self.den * other.den)

    def __mul__(self, other: "URat") -> "URat":
        return URat.of(self.num * other.num, self.den * other.den)

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def is_proper(self) -> bool:
        """分子次数严格小于分母次数（零函数视为真分式）"""
        return self.num.is_zero or self.num.degree() < self.den.degree()


def _members(subset) -> Tuple[int, ...]:
    return tuple(sorted(getattr(subset, "members", subset)))


def lemma_lhs(I, J) -> URat:
    """
    ∏_{λ∈I} (x+2+λ)/(x+2-λ) · ∏_{λ∈J} (x-λ)/(x+λ)  +  (I 与 J 互换)
    """
    x = X_SYMBOL

    def side(up, down):
        result = URat.const(1)
        for lam in up:
            result = result * URat.of(x + 2 + lam, x + 2 - lam)
        for lam in down:
            result = result * URat.of(x - lam, x + lam)
        return result

    I, J = _members(I), _members(J)
    return side(I, J) + side(J, I)


@lru_cache(maxsize=None)
def _solve_partial_fractions(first: Tuple[int, ...], second: Tuple[int, ...]) -> Tuple[Tuple[int, Rational], ...]:
    x = X_SYMBOL
    remainder = lemma_lhs(first, second) - URat.const(2)
    poles = sorted(set(first) | set(second))
    if not poles:
        if remainder.is_zero:
            return ()
        raise AnsatzInconsistent(f"I = J = ∅ 但余项非零: {remainder}")

    denominators = {lam: _upoly((x + 2 - lam) * (x + lam)) for lam in poles}
    common = reduce(lambda f, g: f.lcm(g), denominators.values())
    target = remainder.num * common
    columns = [remainder.den * common.exquo(denominators[lam]) for lam in poles]

    degree = max(max(col.degree() for col in columns), 0 if target.is_zero else target.degree())
    rows = []
    for power in range(degree + 1):
        row = [qq(col.coeff_monomial(x ** power)) for col in columns]
        row.append(qq(target.coeff_monomial(x ** power)))
        rows.append(row)

    width = len(poles)
    reduced, pivots = DomainMatrix(rows, (len(rows), width + 1), QQ).rref()
    if width in pivots:
        raise AnsatzInconsistent(f"I={first}, J={second}: 线性方程组无解")

    matrix = reduced.to_Matrix()
    solution = [QQ.zero] * width
    for row_index, column in enumerate(pivots):
        solution[column] = qq(matrix[row_index, width])

    rebuilt = URat.const(0)
    for lam, value in zip(poles, solution):
        rebuilt = rebuilt + URat.of(to_sympy(value), denominators[lam].as_expr())
    if rebuilt != remainder:
        raise AnsatzInconsistent(f"I={first}, J={second}: 重构与左端不一致")
    return tuple(zip(poles, solution))


def partial_fractions(I, J) -> Dict[int, Rational]:
    """
    求 b_λ 使 lemma_lhs(I, J) = 2 + Σ_{λ∈I∪J} b_λ / ((x+2-λ)(x+λ))

    左端关于 I ↔ J 对称，缓存以无序对为键。

    Raises:
        AnsatzInconsistent: 方程组无解或重构不一致
    """
    first, second = sorted((_members(I), _members(J)))
    return dict(_solve_partial_fractions(first, second))
