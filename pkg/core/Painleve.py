"""
Painlevé 数值验证模块
用 mpmath 多精度浮点验证多项式族诱导的 E_VI、Hamilton 系统与 P_VI 的解。
导数一律用四阶中心差分；实分支 t > 1，平方根取正值。
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import mpmath
from mpmath import mp, mpf

from core.Errors import (BranchDomain, DegenerateDenominator, DifferentiationFailure, PoleAtSample,
                         SingularSample, UmemuraError)
from core.ExactPoly import MPoly, V, delta
from core.Umemura import (DEFAULT_SHIFT, EXTENDED_VARIABLES, NUMERIC_VARIABLES, t_toda, u_boundary,
                          u_gen, umemura_index)

DEFAULT_DPS = 30
DEFAULT_STEP = "1e-5"


@dataclass(frozen=True)
class BVector:
    b1: object
    b2: object
    b3: object
    b4: object

    def as_tuple(self) -> Tuple:
        return self.b1, self.b2, self.b3, self.b4

    def pvi_parameters(self) -> Tuple:
        """(α, β, γ, δ) = (½(b3-b4)², -½(b1+b2)², ½(b1-b2)², -½(b3-b4)(b3+b4-2))"""
        b1, b2, b3, b4 = (mpf(x) for x in self.as_tuple())
        return ((b3 - b4) ** 2 / 2, -(b1 + b2) ** 2 / 2, (b1 - b2) ** 2 / 2,
                -(b3 - b4) * (b3 + b4 - 2) / 2)

    def e2_offset(self):
        """e₂(b1,b3,b4) - ½e₂(b1,b2,b3,b4)"""
        b1, b2, b3, b4 = (mpf(x) for x in self.as_tuple())
        three = b1 * b3 + b1 * b4 + b3 * b4
        four = b1 * b2 + b1 * b3 + b1 * b4 + b2 * b3 + b2 * b4 + b3 * b4
        return three - four / 2


@dataclass(frozen=True)
class EvalPoint:
    t: object
    x: object
    z: object
    w: object


def eval_point(t) -> EvalPoint:
    """
    v = √(t/(t-1)) + √((t-1)/t)，z² = (v-2)/4，w² = (v+2)/4，x = ½log(t/(t-1))

    即 z = sinh(x/2)，w = cosh(x/2)，w² - z² = 1，δ = d/dx。
    z²、w² 取自约定解析器的 NUMERIC_VARIABLES。

    Raises:
        BranchDomain: t ≤ 1
    """
    t = mpf(t)
    if t <= 1:
        raise BranchDomain(f"需要 t > 1: t={t}")
    v = mp.sqrt(t / (t - 1)) + mp.sqrt((t - 1) / t)
    z2, w2 = (eval_mpoly(image, (v, 0, 0)) for image in EXTENDED_VARIABLES[NUMERIC_VARIABLES])
    return EvalPoint(t, mp.log(t / (t - 1)) / 2, mp.sqrt(z2), mp.sqrt(w2))


def eval_mpoly(p: MPoly, values: Sequence) -> object:
    """在 mpmath 数值点上求多项式的值，values 与环的变量一一对应"""
    total = mpf(0)
    for monom, coeff in p.terms():
        term = mpf(int(coeff.numerator)) / int(coeff.denominator)
        for value, exponent in zip(values, monom):
            if exponent:
                term *= value ** exponent
        total += term
    return total


@lru_cache(maxsize=None)
def _family(n: int, m: int) -> Tuple[MPoly, MPoly]:
    U = u_gen(n, m, 0) if m >= 0 else u_boundary(n)
    return U, delta(U)


def _log_derivative(U: MPoly, dU: MPoly, point: EvalPoint, a, b):
    """t(t-1) d/dt log U = -½δU/U（dx/dt = -1/(2t(t-1))）"""
    values = (point.z, point.w, a, b)
    value = eval_mpoly(U, values)
    if value == 0:
        raise PoleAtSample(f"U 在 t={point.t} 处为零")
    return -eval_mpoly(dU, values) / (2 * value)


def h0(t, b1, b2, variant: str = "corrected"):
    """
    {b1²(√t - √(t-1))² + b2²(√t + √(t-1))²}/4

    variant="printed" 时第二项用 √(t+1)
    """
    t, b1, b2 = mpf(t), mpf(b1), mpf(b2)
    second = mp.sqrt(t - 1) if variant == "corrected" else mp.sqrt(t + 1)
    return (b1 ** 2 * (mp.sqrt(t) - mp.sqrt(t - 1)) ** 2 + b2 ** 2 * (mp.sqrt(t) + second) ** 2) / 4


def eval_hnm(n: int, m: int, b1, b2, t, h0_variant: str = "corrected", dps: int = DEFAULT_DPS):
    """h_{n,m}(b1,b2) = t(t-1) d/dt log U_{n,m} - h0，U 取 a = -4b1², b = -4b2²"""
    with mp.workdps(dps):
        point = eval_point(t)
        b1, b2 = mpf(b1), mpf(b2)
        U, dU = _family(n, m)
        return _log_derivative(U, dU, point, -4 * b1 ** 2, -4 * b2 ** 2) - h0(point.t, b1, b2, h0_variant)


def eval_umemura_h(m: int, b1, b2, t, shift: int = DEFAULT_SHIFT, h0_variant: str = "corrected",
                   dps: int = DEFAULT_DPS):
    """h 取自 U_m := U_{0,m-shift}（U_{0,-1} := 1）"""
    index = m - shift
    if index < -1:
        raise ValueError(f"U_{m} 在平移 {shift} 下没有定义")
    return eval_hnm(0, index, b1, b2, t, h0_variant, dps)


# ---------------------------------------------------------------------------
# 差分
# ---------------------------------------------------------------------------

def _stencil(f: Callable, t, step) -> List:
    values = [f(t + k * step) for k in (-2, -1, 0, 1, 2)]
    for value in values:
        if mp.isnan(value) or mp.isinf(value):
            raise DifferentiationFailure(f"t={t} 附近取到非有限值")
    return values


def first_derivative(f: Callable, t, step):
    fm2, fm1, _, f1, f2 = _stencil(f, t, step)
    return (-f2 + 8 * f1 - 8 * fm1 + fm2) / (12 * step)


def second_derivative(f: Callable, t, step):
    fm2, fm1, f0, f1, f2 = _stencil(f, t, step)
    return (-f2 + 16 * f1 - 30 * f0 + 16 * fm1 - fm2) / (12 * step ** 2)


def _scaled_step(t, step) -> object:
    return mpf(step) * max(1, abs(t))


def stencil_order_ratio(f: Callable, t, reference, step="1e-2", dps: int = DEFAULT_DPS):
    """一阶导数误差在 step 与 step/2 下之比，光滑函数约为 16"""
    with mp.workdps(dps):
        t, step = mpf(t), mpf(step)
        coarse = abs(first_derivative(f, t, step) - reference)
        fine = abs(first_derivative(f, t, step / 2) - reference)
        return coarse / fine


# ---------------------------------------------------------------------------
# 残差
# ---------------------------------------------------------------------------

def evi_residual(h: Callable, b: BVector, t, bracket_squared: bool, step=DEFAULT_STEP,
                 dps: int = DEFAULT_DPS, offset: bool = False):
    """
    |h'(t(t-1)h'')² + [h'(2h - (2t-1)h') + b1b2b3b4]^{1 或 2} - ∏(h' + b_k²)|

    Args:
        bracket_squared: 第二个方括号是否平方（印刷形式未平方）
        offset: 在 h 上加 e₂ 常数偏移
    """
    with mp.workdps(dps):
        t = mpf(t)
        b1, b2, b3, b4 = (mpf(x) for x in b.as_tuple())
        shift = b.e2_offset() if offset else 0
        step = _scaled_step(t, step)
        value = h(t) + shift
        d1 = first_derivative(h, t, step)
        d2 = second_derivative(h, t, step)
        bracket = d1 * (2 * value - (2 * t - 1) * d1) + b1 * b2 * b3 * b4
        lhs = d1 * (t * (t - 1) * d2) ** 2 + (bracket ** 2 if bracket_squared else bracket)
        rhs = (d1 + b1 ** 2) * (d1 + b2 ** 2) * (d1 + b3 ** 2) * (d1 + b4 ** 2)
        return abs(lhs - rhs)


def pvi_residual(q: Callable, parameters: Sequence, t, step=DEFAULT_STEP, dps: int = DEFAULT_DPS,
                 beta_sign: int = -1):
    """
    |q'' - P_VI 右端|

    Args:
        beta_sign: β 项的符号，-1 为印刷形式 α - βt/q²，+1 为 α + βt/q²

    Raises:
        SingularSample: q ∈ {0, 1, t}
    """
    with mp.workdps(dps):
        t = mpf(t)
        alpha, beta, gamma, delta_ = parameters
        step = _scaled_step(t, step)
        value = q(t)
        tiny = mpf(10) ** (-dps // 2)
        if min(abs(value), abs(value - 1), abs(value - t)) < tiny:
            raise SingularSample(f"q(t)={value} 落在奇点上")
        d1 = first_derivative(q, t, step)
        d2 = second_derivative(q, t, step)
        rhs = ((1 / value + 1 / (value - 1) + 1 / (value - t)) * d1 ** 2 / 2
               - (1 / t + 1 / (t - 1) + 1 / (value - t)) * d1
               + value * (value - 1) * (value - t) / (t ** 2 * (t - 1) ** 2)
               * (alpha + beta_sign * beta * t / value ** 2 + gamma * (t - 1) / (value - 1) ** 2
                  + delta_ * t * (t - 1) / (value - t) ** 2))
        return abs(d2 - rhs)


# ---------------------------------------------------------------------------
# 种子解与 Hamilton 系统
# ---------------------------------------------------------------------------

def hamiltonian(b: BVector, t, q, p):
    b1, b2, b3, b4 = (mpf(x) for x in b.as_tuple())
    linear = (b1 + b2) * (q - 1) * (q - t) + (b1 - b2) * q * (q - t) + (b3 + b4) * q * (q - 1)
    return (q * (q - 1) * (q - t) * p ** 2 - linear * p + (b1 + b3) * (b1 + b4) * (q - t)) / (t * (t - 1))


def seed_q(t, b1, b2, variant: str = "corrected", branch: int = 1):
    """
    corrected: ((b1+b2)² t - (b1²-b2²)√(t(t-1))) / ((b1-b2)² + 4b1b2 t)
    printed:   ((b1+b2)² - (b1²-b2²)√(t(1-t))) / ((b1-b2)² + 4b1b2 t)，t > 1 时为复数
    """
    t, b1, b2 = mpf(t), mpf(b1), mpf(b2)
    denominator = (b1 - b2) ** 2 + 4 * b1 * b2 * t
    if denominator == 0:
        raise SingularSample(f"种子 q 的分母在 t={t} 处为零")
    if variant == "corrected":
        numerator = (b1 + b2) ** 2 * t - branch * (b1 ** 2 - b2 ** 2) * mp.sqrt(t * (t - 1))
    else:
        numerator = (b1 + b2) ** 2 - branch * (b1 ** 2 - b2 ** 2) * mp.sqrt(t * (1 - t))
    return numerator / denominator


def seed_p(t, b1, b2, variant: str = "corrected", branch: int = 1):
    """p₀ = (b1 q₀ - ½(b1+b2)) / (q₀(q₀-1))"""
    q = seed_q(t, b1, b2, variant, branch)
    if q == 0 or q == 1:
        raise SingularSample(f"q₀(t={t}) = {q}")
    return (mpf(b1) * q - (mpf(b1) + mpf(b2)) / 2) / (q * (q - 1))


def check_hamiltonian_seed(b1, b2, t, variant: str = "corrected", branch: int = 1, p_shift=0,
                           step=DEFAULT_STEP, dps: int = DEFAULT_DPS) -> Tuple:
    """
    返回 (|dq/dt - ∂H/∂p|, |dp/dt + ∂H/∂q|)，b = (b1, b2, -½, 0)

    Args:
        p_shift: 给 p₀ 加的扰动（负对照）
    """
    with mp.workdps(dps):
        t = mpf(t)
        if t <= 1:
            raise BranchDomain(f"需要 t > 1: t={t}")
        b = BVector(b1, b2, mpf(-1) / 2, 0)
        shift = mpf(p_shift)

        def q(s):
            return seed_q(s, b1, b2, variant, branch)

        def p(s):
            return seed_p(s, b1, b2, variant, branch) + shift

        step = _scaled_step(t, step)
        q0, p0 = q(t), p(t)
        local_q = _scaled_step(abs(q0), step)
        local_p = _scaled_step(abs(p0), step)
        dH_dp = first_derivative(lambda s: hamiltonian(b, t, q0, s), p0, local_p)
        dH_dq = first_derivative(lambda s: hamiltonian(b, t, s, p0), q0, local_q)
        return (abs(first_derivative(q, t, step) - dH_dp),
                abs(first_derivative(p, t, step) + dH_dq))


# ---------------------------------------------------------------------------
# q_m 与 h̄_{1,m}
# ---------------------------------------------------------------------------

QM_SOURCES = ("u_gen", "toda")


def _umemura_values(j: int, shift: int, point: EvalPoint, a, b) -> Tuple:
    U = umemura_index(j, shift)
    values = (point.z, point.w, a, b)
    value = eval_mpoly(U, values)
    if value == 0:
        raise PoleAtSample(f"U_{j} 在 t={point.t} 处为零")
    return value, -eval_mpoly(delta(U), values) / (2 * value)


def _toda_values(j: int, point: EvalPoint, b1, b2) -> Tuple:
    """U_j = 2^{j(j-1)} T_j(v)；v = 2cosh x，dv/dx = 2sinh x = 4zw"""
    if j < 0:
        raise ValueError(f"T_{j} 没有定义")
    T = t_toda(j)
    values = (4 * point.w ** 2 - 2, b1 ** 2, b2 ** 2)
    value = eval_mpoly(T, values)
    if value == 0:
        raise PoleAtSample(f"T_{j} 在 t={point.t} 处为零")
    return 2 ** (j * (j - 1)) * value, -2 * point.z * point.w * eval_mpoly(T.diff(V), values) / value


def _qm_values(j: int, source: str, shift: int, point: EvalPoint, b1, b2) -> Tuple:
    """(U_j, t(t-1) d/dt log U_j)"""
    if source == "toda":
        return _toda_values(j, point, b1, b2)
    if source == "u_gen":
        return _umemura_values(j, shift, point, -4 * b1 ** 2, -4 * b2 ** 2)
    raise ValueError(f"未知 U_m 来源: {source}，可选: {', '.join(QM_SOURCES)}")


def eval_qm(m: int, b1, b2, t, shift: int = DEFAULT_SHIFT, dps: int = DEFAULT_DPS, source: str = "u_gen"):
    """
    q_m = t + 4U_m²{(m+½)L_{m+1} - (m+3/2)L_m - ½b1b2 + ¼(b1² z/w + b2² w/z)}
              / (U_{m+1}U_{m-1} - (2m+1)²U_m²)，L_j = t(t-1) d/dt log U_j

    Args:
        source: "u_gen" 取 U_m := U_{0,m-shift}；"toda" 取 U_m := 2^{m(m-1)} T_m(v)，忽略 shift。
            该比值不是各 U_m 分别缩放下的不变量，两种归一化给出不同的函数

    Raises:
        DegenerateDenominator: 分母在采样点为零
    """
    with mp.workdps(dps):
        point = eval_point(t)
        b1, b2 = mpf(b1), mpf(b2)
        before, _ = _qm_values(m - 1, source, shift, point, b1, b2)
        current, log_current = _qm_values(m, source, shift, point, b1, b2)
        after, log_after = _qm_values(m + 1, source, shift, point, b1, b2)
        denominator = after * before - (2 * m + 1) ** 2 * current ** 2
        if abs(denominator) < mpf(10) ** (-dps // 2):
            raise DegenerateDenominator(f"m={m}, t={point.t}")
        ratio = b1 ** 2 * point.z / point.w + b2 ** 2 * point.w / point.z
        bracket = (m + mpf(1) / 2) * log_after - (m + mpf(3) / 2) * log_current - b1 * b2 / 2 + ratio / 4
        return point.t + 4 * current ** 2 * bracket / denominator


def eval_hbar(m: int, b1, b2, t, shift: int = DEFAULT_SHIFT, dps: int = DEFAULT_DPS, source: str = "u_gen"):
    """h̄_{1,m} = L_{m+1} - ¼(b1² z/w + b2² w/z) + (m+½)q_m - ½(m+½)"""
    with mp.workdps(dps):
        point = eval_point(t)
        b1, b2 = mpf(b1), mpf(b2)
        _, log_after = _qm_values(m + 1, source, shift, point, b1, b2)
        ratio = b1 ** 2 * point.z / point.w + b2 ** 2 * point.w / point.z
        half = m + mpf(1) / 2
        return log_after - ratio / 4 + half * eval_qm(m, b1, b2, point.t, shift, dps, source) - half / 2


# ---------------------------------------------------------------------------
# 残差表
# ---------------------------------------------------------------------------

RESIDUAL_CASES = ("prop46i", "prop46ii", "prop46iii", "sec5-qm", "seed")


@dataclass
class ResidualSettings:
    m: int = 1
    n: int = 1
    b1: float = 0.3
    b2: float = 0.2
    b3: float = 0.5
    b4: float = 0.25
    shift: int = DEFAULT_SHIFT
    step: str = DEFAULT_STEP
    dps: int = DEFAULT_DPS


def _number(value) -> float:
    return float(abs(value)) if isinstance(value, mpmath.mpc) else float(value)


def _evi_pair(h: Callable, b: BVector, t, settings: ResidualSettings, offset: bool = False) -> Dict[str, float]:
    return {
        "residual_printed_bracket": _number(evi_residual(h, b, t, False, settings.step, settings.dps, offset)),
        "residual_squared_bracket": _number(evi_residual(h, b, t, True, settings.step, settings.dps, offset)),
    }


PVI_SIGNS = (("printed", -1), ("standard", 1))


def _pvi_columns(q: Callable, b: BVector, t, settings: ResidualSettings, sign: int) -> Dict[str, float]:
    return {"pvi_residual": _number(pvi_residual(q, b.pvi_parameters(), t, settings.step, settings.dps, sign))}


def _row(case: str, b: BVector, t, **extra) -> dict:
    row = {"case": case, "b_vector": [float(x) for x in b.as_tuple()], "t": float(t),
           "residual_printed_bracket": None, "residual_squared_bracket": None}
    row.update(extra)
    return row


def _case_rows(case: str, t, s: ResidualSettings) -> List[dict]:
    half = mpf(1) / 2
    if case == "prop46i":
        rows = []
        b = BVector(s.b1, s.b2, s.m + half, 0)
        for index_shift in (0, 1):
            for variant in ("corrected", "printed"):
                def h(x, index_shift=index_shift, variant=variant):
                    return eval_umemura_h(s.m, s.b1, s.b2, x, index_shift, variant, s.dps)
                row = _row(case, b, t, index_shift=index_shift, h0=variant, **_evi_pair(h, b, t, s))
                row["offset"] = _evi_pair(h, b, t, s, offset=True)
                rows.append(row)
        return rows
    if case == "prop46ii":
        b = BVector(0, s.m + 1, s.b3, s.b4)

        def closed(x):
            return -(2 * x - 1) * (s.m + 1) ** 2 / 2

        gap = eval_hnm(1, s.m, 0, s.m + 1, t, dps=s.dps) - closed(mpf(t))
        return [_row(case, b, t, closed_form_gap=_number(gap), **_evi_pair(closed, b, t, s))]
    if case == "prop46iii":
        rows = []
        b = BVector(0, s.b2, mpf(s.n) / 2, mpf(s.n + 2 * s.m + 1) / 2)
        for variant in ("corrected", "printed"):
            def h(x, variant=variant):
                return eval_hnm(s.n, s.m, 0, s.b2, x, variant, s.dps)
            row = _row(case, b, t, h0=variant, **_evi_pair(h, b, t, s))
            row["offset"] = _evi_pair(h, b, t, s, offset=True)
            rows.append(row)
        return rows
    if case == "sec5-qm":
        rows = []
        first = BVector(s.b1, s.b2, s.m + half, 0)
        second = BVector(s.b1, s.b2, 0, s.m + half)
        third = BVector(s.b1, s.b2, s.m + half, 1)
        readings = [("u_gen", index_shift) for index_shift in (0, 1)] + [("toda", None)]
        for source, index_shift in readings:
            shift = s.shift if index_shift is None else index_shift

            def q(x, source=source, shift=shift):
                return eval_qm(s.m, s.b1, s.b2, x, shift, s.dps, source)

            def hbar(x, source=source, shift=shift):
                return eval_hbar(s.m, s.b1, s.b2, x, shift, s.dps, source)

            labels = {"source": source, "index_shift": index_shift}
            rows.extend(_row(case, b, t, kind="pvi", pvi_sign=name, **labels, **_pvi_columns(q, b, t, s, sign))
                        for b in (first, second) for name, sign in PVI_SIGNS)
            rows.append(_row(case, third, t, kind="hbar", **labels, **_evi_pair(hbar, third, t, s)))
        return rows
    if case == "seed":
        rows = []
        b = BVector(s.b1, s.b2, -half, 0)
        for variant in ("corrected", "printed"):
            for branch in (1, -1):
                dq, dp = check_hamiltonian_seed(s.b1, s.b2, t, variant, branch, 0, s.step, s.dps)

                def q(x, variant=variant, branch=branch):
                    return seed_q(x, s.b1, s.b2, variant, branch)

                for name, sign in PVI_SIGNS:
                    rows.append(_row(case, b, t, variant=variant, branch=branch, pvi_sign=name,
                                     dq_residual=_number(dq), dp_residual=_number(dp),
                                     **_pvi_columns(q, b, t, s, sign)))
        return rows
    raise ValueError(f"未知残差用例: {case}")


def residual_table(case: str, t_values: Sequence, settings: Optional[ResidualSettings] = None) -> List[dict]:
    """
    生成残差表

    单行计算失败（采样点为极点等）时在该行记录 error，不中断整张表。

    Raises:
        BranchDomain: 任一 t ≤ 1（在计算前检查）
    """
    settings = settings or ResidualSettings()
    if case not in RESIDUAL_CASES:
        raise ValueError(f"未知残差用例: {case}")
    for t in t_values:
        if mpf(t) <= 1:
            raise BranchDomain(f"需要 t > 1: t={t}")
    rows = []
    for t in t_values:
        try:
            rows.extend(_case_rows(case, t, settings))
        except UmemuraError as e:
            rows.append({"case": case, "t": float(t), "error": f"{type(e).__name__}: {e}"})
    return rows
