"""
Umemura 多项式族模块
四条独立构造路径：
    1. 子集求和定义 U_{n,m}^{(k)}
    2. 行列式表示（含若干候选修正）
    3. 关于 v 的 Toda 型递推 T_n
    4. 基于 GL 维数的显式公式
以及 a = b 时的闭式 X_{n,m}，和用于统一各处归一化约定的约定解析器
"""
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from itertools import product
from math import comb, prod
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from sympy.polys.domains import QQ

from core.Combinat import (csign_exponent, dcoef, gl_dim, ground_set, lambda_of_subset,
                           single_sign_exponent, weight)
from core.Errors import InvalidK, NotDivisible, RecurrenceDivisionFailed
from core.ExactPoly import (A, B, B1, B2, MPoly, TODA, V, W, Z, ZW, exact_div, proportionality,
                            substitute)
from utils.FormatUtils import FormatUtils

DEFAULT_SHIFT = 1


class ParamProducts:
    """
    参数累积乘积

    ā_k = s + offset(k)，s_i = ∏ ā_j，j 从 i 开始以 stride 递减到 1 为止。
    stride = 2 时奇偶链互不混合（参数乘积 a_i），stride = 1 时为显式公式的 c_k。
    """

    def __init__(self, symbol: MPoly, offset: Callable[[int], int], stride: int):
        self.symbol = symbol
        self.offset = offset
        self.stride = stride
        self._cumulative: Dict[int, MPoly] = {}
        self._sets: Dict[Tuple[int, ...], MPoly] = {}

    def bar(self, k: int) -> MPoly:
        return self.symbol + self.offset(k)

    def cumulative(self, i: int) -> MPoly:
        if i <= 0:
            return self.symbol.ring.one
        if i not in self._cumulative:
            self._cumulative[i] = self.cumulative(i - self.stride) * self.bar(i)
        return self._cumulative[i]

    def of_set(self, members: Iterable[int]) -> MPoly:
        key = tuple(sorted(members))
        if key not in self._sets:
            value = self.symbol.ring.one
            for i in key:
                value = value * self.cumulative(i)
            self._sets[key] = value
        return self._sets[key]


PARAM_A = ParamProducts(A, lambda k: (k - 1) ** 2, stride=2)
PARAM_B = ParamProducts(B, lambda k: (k - 1) ** 2, stride=2)
EXPLICIT_C = ParamProducts(A, lambda k: (2 * k - 1) ** 2, stride=1)
EXPLICIT_D = ParamProducts(B, lambda k: (2 * k - 1) ** 2, stride=1)


def double_factorial(k: int) -> int:
    """k!!，约定 0!! = (-1)!! = 1"""
    return prod(range(k, 0, -2))


def _check_k(n: int, k: int, allow_empty: bool) -> bool:
    """返回 False 表示空和"""
    if k < 0:
        raise InvalidK(f"k 必须非负: k={k}")
    if k > n:
        if allow_empty:
            return False
        raise InvalidK(f"需要 0 ≤ k ≤ n: n={n}, k={k}")
    return True


@lru_cache(maxsize=None)
def u_gen(n: int, m: int, k: int = 0, allow_empty: bool = False, free_sign: bool = False) -> MPoly:
    """
    广义 Umemura 多项式 U_{n,m}^{(k)}(z, w; a, b)

    Σ_{[k] ⊆ I ⊆ [n;m]} ∏_{i∈I\\[k], j∈[k]} (i+j)/(i-j) · d(I) · (-1)^{c(I)}
        · a_{I\\[k]} b_{[n;m]\\I} z^{|I\\[k]|} w^{|[n;m]\\I|}

    Args:
        allow_empty: k > n 时返回空和 0 而不是抛出 InvalidK
        free_sign: 每项再乘 (-1)^{#(I\\[k])}

    Raises:
        InvalidK: k < 0，或 k > n 且 allow_empty 为 False
    """
    if not _check_k(n, k, allow_empty):
        return ZW.zero
    ground = ground_set(n, m)
    required = set(range(1, k + 1))
    total = ZW.zero
    for subset in ground.index_subsets():
        if not required <= set(subset.members):
            continue
        free = [i for i in subset.members if i > k]
        cross = QQ.one
        for i in free:
            for j in required:
                cross *= QQ(i + j, i - j)
        exponent = csign_exponent(subset) + (len(free) if free_sign else 0)
        coefficient = cross * dcoef(subset) * (-1) ** exponent
        monomial = ZW.term_new((weight(free), weight(subset.complement), 0, 0), coefficient)
        total = total + monomial * PARAM_A.of_set(free) * PARAM_B.of_set(subset.complement)
    return total


def u_boundary(n: int) -> MPoly:
    """
    U_{n,-1}

    [n;m] 每增加一个 m 追加元素 n+2m，向下延拓得 [n;-1] = {1,…,n-1} = [n-1;0]，
    故 U_{n,-1} = U_{n-1,0}，U_{0,-1} = 1
    """
    if n < 0:
        raise ValueError(f"n 必须非负: {n}")
    return u_gen(n - 1, 0, 0) if n else ZW.one


def umemura_index(m: int, shift: int = DEFAULT_SHIFT) -> MPoly:
    """U_m := U_{0, m-shift}，其中 U_{0,-1} := 1"""
    index = m - shift
    if index < -1:
        raise ValueError(f"U_{m} 在平移 {shift} 下没有定义")
    return u_boundary(0) if index == -1 else u_gen(0, index, 0)


# ---------------------------------------------------------------------------
# 行列式表示
# ---------------------------------------------------------------------------

def bareiss_det(rows: List[List[MPoly]], target=ZW) -> MPoly:
    """无分数 Gauss 消元（Bareiss）求行列式，每步精确除以上一主元"""
    matrix = [list(row) for row in rows]
    size = len(matrix)
    if size == 0:
        return target.one
    sign = 1
    previous = target.one
    for k in range(size - 1):
        if not matrix[k][k]:
            for i in range(k + 1, size):
                if matrix[i][k]:
                    matrix[k], matrix[i] = matrix[i], matrix[k]
                    sign = -sign
                    break
            else:
                return target.zero
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                matrix[i][j] = exact_div(matrix[k][k] * matrix[i][j] - matrix[i][k] * matrix[k][j], previous)
        previous = matrix[k][k]
    return matrix[-1][-1] * sign


def determinant_variants() -> List[Tuple[bool, bool]]:
    """(signed, swapped) 的全部组合，第一项为原样公式"""
    return [(False, False), (True, False), (False, True), (True, True)]


def u_gen_det(n: int, m: int, k: int = 0, signed: bool = False, swapped: bool = False) -> MPoly:
    """
    行列式表示，指标 i, j ∈ [n;m] \\ [k]

    对角: a_i w^i ∏_{s∈[k]} (i+s)/(i-s)
    全部: (2i/(i+j)) c(i) ∏_{s≠i} |(i+s)/(i-s)| b_i z^i

    Args:
        signed: 用 (-1)^{c({i})} 代替乘数 c(i)
        swapped: 交换 a 与 b 的角色（对角取 b_i w^i，非对角取 a_i z^i）
    """
    _check_k(n, k, allow_empty=False)
    ground = ground_set(n, m)
    indices = [i for i in ground.elements if i > k]
    diagonal, off_diagonal = (PARAM_B, PARAM_A) if swapped else (PARAM_A, PARAM_B)

    rows = []
    for i in indices:
        if signed:
            c = (-1) ** single_sign_exponent(i, n)
        else:
            c = i if i <= n else (i - n) // 2
        spread = prod((abs(QQ(i + s, i - s)) for s in ground.elements if s != i), start=QQ.one)
        off = ZW.term_new((i, 0, 0, 0), QQ(1)) * off_diagonal.cumulative(i)
        row = []
        for j in indices:
            entry = off * (QQ(2 * i, i + j) * c * spread)
            if i == j:
                factor = prod((QQ(i + s, i - s) for s in range(1, k + 1)), start=QQ.one)
                entry = entry + ZW.term_new((0, i, 0, 0), factor) * diagonal.cumulative(i)
            row.append(entry)
        rows.append(row)
    return bareiss_det(rows)


def resolve_determinant_variant(max_ground: int = 6) -> Optional[Tuple[bool, bool]]:
    """返回在全部 n+2m ≤ max_ground 上与 u_gen 一致的第一个变体"""
    cases = sorted(((n, m, k) for n in range(max_ground + 1) for m in range(max_ground // 2 + 1)
                    if n + 2 * m <= max_ground for k in range(n + 1)),
                   key=lambda c: (c[0] + 2 * c[1], c))
    for signed, swapped in determinant_variants():
        if all(u_gen_det(n, m, k, signed, swapped) == u_gen(n, m, k) for n, m, k in cases):
            return signed, swapped
    return None


# ---------------------------------------------------------------------------
# Toda 递推与显式公式
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def t_toda(n: int) -> MPoly:
    """
    T_{n-1} T_{n+1} = {¼(-2B1-2B2+(B1-B2)v) + (n-½)²} T_n²
                      + ¼(v²-4)² (T_n T_n'' - T_n'²) + ¼(v²-4) v T_n T_n'

    T_0 = T_1 = 1，每一步对 T_{n-1} 做精确除法。

    Raises:
        RecurrenceDivisionFailed: 除法余式非零
    """
    if n < 0:
        raise ValueError(f"n 必须非负: {n}")
    if n <= 1:
        return TODA.one
    before, current = t_toda(n - 2), t_toda(n - 1)
    k = n - 1
    coefficient = (-2 * B1 - 2 * B2 + (B1 - B2) * V) * QQ(1, 4) + QQ((2 * k - 1) ** 2, 4)
    first = current.diff(V)
    second = first.diff(V)
    shape = V ** 2 - 4
    numerator = (coefficient * current ** 2
                 + shape ** 2 * (current * second - first ** 2) * QQ(1, 4)
                 + shape * V * current * first * QQ(1, 4))
    try:
        return exact_div(numerator, before)
    except NotDivisible as e:
        raise RecurrenceDivisionFailed(n, e.remainder) from e


def printed_t2_readings() -> Dict[str, MPoly]:
    """T_2 闭式的两种括号读法"""
    left = (-4 * B1 + 1) * (2 - V) * QQ(1, 4)
    right = (-4 * B2 + 1) * (2 + V) * QQ(1, 4)
    return {
        "half_of_sum": (left + right) * QQ(1, 2),
        "half_of_first_term": left * QQ(1, 2) + right,
    }


@lru_cache(maxsize=None)
def u_explicit26(n: int, dimension: str = "GL(n)") -> MPoly:
    """
    Σ_{I⊆[n-1]} dim λ(I) · c_I d_{[n-1]\\I} z^{|I|} w^{|I^c|}，输出中 c→a, d→b

    Args:
        dimension: "GL(n)" 或 "GL(n-1)"，维数取自哪个群
    """
    if n < 1:
        raise ValueError(f"n 必须为正: {n}")
    if dimension not in ("GL(n)", "GL(n-1)"):
        raise ValueError(f"未知维数约定: {dimension}")
    rank = n if dimension == "GL(n)" else n - 1
    elements = list(range(1, n))
    total = ZW.zero
    for mask in range(1 << len(elements)):
        chosen = [e for bit, e in enumerate(elements) if mask >> bit & 1]
        rest = [e for e in elements if e not in chosen]
        size = gl_dim(rank, lambda_of_subset(chosen, n))
        monomial = ZW.term_new((weight(chosen), weight(rest), 0, 0), QQ(size))
        total = total + monomial * EXPLICIT_C.of_set(chosen) * EXPLICIT_D.of_set(rest)
    return total


# ---------------------------------------------------------------------------
# a = b 时的闭式
# ---------------------------------------------------------------------------

def x_factored(n: int, m: int) -> MPoly:
    """X_{n,m} = a_{[n;m]} (z+w)^{C(n+m+1,2)} (z-w)^{C(m+1,2)}"""
    ground = ground_set(n, m)
    return PARAM_A.of_set(ground.elements) * (Z + W) ** comb(n + m + 1, 2) * (Z - W) ** comb(m + 1, 2)


def factored_sign(m: int) -> int:
    """U_{n,m}|_{b=a} = (-1)^{C(m+1,2)} X_{n,m}，即 (z-w) 的幂换成 (w-z)"""
    return (-1) ** comb(m + 1, 2)


# ---------------------------------------------------------------------------
# 约定解析
# ---------------------------------------------------------------------------

SHIFTS = (-1, 0, 1)
ALPHAS = (0, 1, -1)
BETAS = (0, 1, -1, 2, -2)
DIMENSIONS = ("GL(n)", "GL(n-1)")

DECLARED_VARIABLES = {
    "z2=(2-v)/4,w2=(2+v)/4": ((2 - V) * QQ(1, 4), (2 + V) * QQ(1, 4)),
    "z2=(v^2-4)/4,w2=v^2/4": ((V ** 2 - 4) * QQ(1, 4), V ** 2 * QQ(1, 4)),
}
# 数值求值（Painleve）所用的映射
NUMERIC_VARIABLES = "z2=(v-2)/4,w2=(v+2)/4"
EXTENDED_VARIABLES = {
    NUMERIC_VARIABLES: ((V - 2) * QQ(1, 4), (V + 2) * QQ(1, 4)),
}

# 显式公式中的 z, w 与参数 c = -4 b1^2, d = -4 b2^2
_EXPLICIT_IMAGES = [(2 - V) * QQ(1, 4), (2 + V) * QQ(1, 4), -4 * B1, -4 * B2]


@dataclass
class ConventionResolution:
    status: str
    max_index: int
    shift: int
    alpha: int
    beta: int
    variables: str
    dimension: str
    comparisons_passed: int
    counterexample: Optional[Dict[str, str]] = None
    notes: List[str] = field(default_factory=list)
    extended: Optional["ConventionResolution"] = None

    def to_dict(self) -> dict:
        return asdict(self)


class _ImageCache:
    """各族在 TODA 环中的像，按需计算一次"""

    def __init__(self, variables: Dict[str, tuple]):
        self.variables = variables
        self._explicit: Dict[tuple, MPoly] = {}
        self._generalized: Dict[tuple, MPoly] = {}

    def explicit(self, j: int, dimension: str) -> MPoly:
        key = (j, dimension)
        if key not in self._explicit:
            self._explicit[key] = substitute(u_explicit26(j, dimension), _EXPLICIT_IMAGES, TODA)
        return self._explicit[key]

    def generalized(self, m: int, variables: str) -> MPoly:
        key = (m, variables)
        if key not in self._generalized:
            z2, w2 = self.variables[variables]
            self._generalized[key] = substitute(u_gen(0, m, 0), [z2, w2, -4 * B1, -4 * B2], TODA,
                                                squared=(0, 1))
        return self._generalized[key]


def _comparisons(cache: _ImageCache, max_index: int, shift: int, alpha: int, beta: int,
                 variables: str, dimension: str):
    for j in range(max_index + 1):
        scaled = t_toda(j) * QQ(2) ** (alpha * j * (j - 1) + beta * j)
        if j >= 1:
            yield f"explicit26(n={j}) vs scaled T_{j}", cache.explicit(j, dimension), scaled
        m = j - shift
        if m >= 0:
            yield f"u_gen(0,{m},0) vs scaled T_{j}", cache.generalized(m, variables), scaled


def _t2_notes() -> List[str]:
    notes = [f"recurrence T_2 = {FormatUtils.to_text(t_toda(2))}"]
    for name, value in printed_t2_readings().items():
        ratio = proportionality(value, t_toda(2))
        verdict = f"= {ratio} × recurrence T_2" if ratio is not None else "not proportional to recurrence T_2"
        notes.append(f"printed T_2 ({name}) = {FormatUtils.to_text(value)} {verdict}")
    return notes


def _search(max_index: int, variables: Dict[str, tuple]) -> ConventionResolution:
    cache = _ImageCache(variables)
    best = None
    for shift, alpha, beta, name, dimension in product(SHIFTS, ALPHAS, BETAS, variables, DIMENSIONS):
        passed = 0
        failure = None
        for label, lhs, rhs in _comparisons(cache, max_index, shift, alpha, beta, name, dimension):
            if lhs != rhs:
                failure = {
                    "comparison": label,
                    "lhs": FormatUtils.to_text(lhs),
                    "rhs": FormatUtils.to_text(rhs),
                    "difference": FormatUtils.to_text(lhs - rhs),
                }
                break
            passed += 1
        candidate = ConventionResolution(
            status="resolved" if failure is None else "unresolved",
            max_index=max_index, shift=shift, alpha=alpha, beta=beta,
            variables=name, dimension=dimension, comparisons_passed=passed,
            counterexample=failure,
        )
        if failure is None:
            return candidate
        if best is None or passed > best.comparisons_passed:
            best = candidate
    return best


def resolve_conventions(max_index: int = 5, extended: bool = False) -> ConventionResolution:
    """
    在有限约定空间中搜索使 t_toda、u_explicit26、u_gen(0,·,0) 在 0..max_index 上一致的赋值

    搜索顺序: shift × alpha × beta × 变量对应 × 维数约定。
    无解时返回存活比较数最多的候选及其第一处失败（最小反例）。

    Args:
        extended: 另外在加入 (z², w²) ↔ ((v-2)/4, (v+2)/4) 的空间中搜索，结果放在 extended 字段
    """
    resolution = _search(max_index, DECLARED_VARIABLES)
    resolution.notes = _t2_notes()
    if extended:
        resolution.extended = _search(max_index, {**DECLARED_VARIABLES, **EXTENDED_VARIABLES})
    return resolution
