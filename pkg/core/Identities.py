"""
恒等式验证模块
把每个恒等式写成精确的多项式 / 有理函数命题，逐一检查并给出报告。
恒等式不成立不是异常：返回 status = "fail" 的 IdentityReport，并附带差值作为反例。
"""
import time
from dataclasses import asdict, dataclass, field
from itertools import product
from math import comb
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from sympy.polys.domains import QQ

from core.Combinat import dcoef, ground_set
from core.Errors import AnsatzInconsistent, NonIntegerCoefficient, NotDivisible
from core.ExactPoly import (A, B, P1, P2, PB, PW, PZ, Rational, URat, W, Z, ZW, exact_div, hirota2,
                            lemma_lhs, partial_fractions, proportionality, reduce_mod_relation, specialize,
                            substitute, zw_degree)
from core.Umemura import (DEFAULT_SHIFT, PARAM_B, double_factorial, factored_sign, u_boundary, u_gen,
                          umemura_index, x_factored)
from utils.FormatUtils import FormatUtils

PASS = "pass"
FAIL = "fail"
CONDITIONAL = "conditional"


@dataclass
class IdentityReport:
    id: str
    params: Dict[str, object]
    status: str
    convention: Optional[str]
    witness_text: str
    anchor: str
    wall_time_ms: Optional[int] = None
    details: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SuiteBounds:
    """
    单个恒等式的检查范围

    max_total 的含义随恒等式而定：引理族与整性检查为 n + 2m 的上界，eq42 为 n + m 的上界
    """
    max_n: int = 0
    max_m: int = 0
    max_total: Optional[int] = None


def _report(identity: str, params: dict, difference, anchor: str, convention: str = None,
            details: dict = None) -> IdentityReport:
    """差值为零则 pass，否则 fail 并以差值为反例"""
    return IdentityReport(
        id=identity,
        params=params,
        status=PASS if not difference else FAIL,
        convention=convention,
        witness_text="" if not difference else FormatUtils.to_text(difference),
        anchor=anchor,
        details=details or {},
    )


def _hirota_square(U):
    return hirota2(U, U)


# ---------------------------------------------------------------------------
# 双线性递推
# ---------------------------------------------------------------------------

BILINEAR_ANCHOR = ("U_{n,m-1}U_{n,m+1} = (-ā_{n+2m+2}z² + b̄_{n+2m+2}w²)U_{n,m}² + 8z²w² D²U_{n,m}∘U_{n,m}"
                   " - 4/(n+2m+1)² ab(a-b)z²w²(U^{(1)}_{n,m})²")


def _vanishing_loci(difference) -> Dict[str, bool]:
    return {
        "a=0": not specialize(difference, a=0),
        "b=0": not specialize(difference, b=0),
        "a=b": not specialize(difference, b=A),
    }


def check_bilinear_recurrence(n: int, m: int) -> IdentityReport:
    """
    双线性递推，m = 0 时 U_{n,-1} 取 u_boundary(n) = U_{n-1,0}

    差值约化到 w² = z² + 1 后为零即通过；同时记录未约化时是否成立。
    不通过时记录 unwanted 项前常数的拟合值，以及差值在 a = 0、b = 0、a = b 上是否为零；
    三处都为零时差值被 ab(a-b) 整除，商写入 details
    """
    U = u_gen(n, m, 0)
    before = u_boundary(n) if m == 0 else u_gen(n, m - 1, 0)
    after = u_gen(n, m + 1, 0)
    top = (n + 2 * m + 1) ** 2
    bracket = -(A + top) * Z ** 2 + (B + top) * W ** 2
    main = bracket * U ** 2 + 8 * Z ** 2 * W ** 2 * _hirota_square(U)
    unwanted = A * B * (A - B) * Z ** 2 * W ** 2 * u_gen(n, m, 1, allow_empty=True) ** 2
    printed = QQ(4, top)

    raw = before * after - main + unwanted * printed
    reduced = reduce_mod_relation(raw)
    details = {"raw_zero": not raw, "printed_coefficient": str(printed)}
    if reduced:
        fitted = proportionality(reduce_mod_relation(main - before * after), reduce_mod_relation(unwanted))
        details["fitted_coefficient"] = None if fitted is None else str(fitted)
        loci = _vanishing_loci(reduced)
        details["vanishes_on"] = loci
        if all(loci.values()):
            try:
                quotient = exact_div(reduced, A * B * (A - B))
                details["leftover_over_ab(a-b)"] = FormatUtils.to_text(quotient)
            except NotDivisible:
                pass
    return _report("thm41", {"n": n, "m": m}, reduced, BILINEAR_ANCHOR,
                   convention="mod w^2-z^2-1", details=details)


SHADOW_ANCHOR = "X̃_{n,m-1}X̃_{n,m+1} = ā_{n+2m+2}(w²-z²)X̃² + 8z²w² D²X̃∘X̃, X̃ = (-1)^{C(m+1,2)} X_{n,m}"


def _signed_factored(n: int, m: int):
    """X̃_{n,m}；X̃_{n,-1} = X̃_{n-1,0}，与 u_boundary 一致"""
    if m < 0:
        return x_factored(n - 1, 0) if n else ZW.one
    return x_factored(n, m) * factored_sign(m)


def check_factored_shadow(n: int, m: int) -> IdentityReport:
    """a = b 时的递推：用带符号的闭式 X 代替 U"""
    X = _signed_factored(n, m)
    top = (n + 2 * m + 1) ** 2
    main = (A + top) * (W ** 2 - Z ** 2) * X ** 2 + 8 * Z ** 2 * W ** 2 * _hirota_square(X)
    raw = _signed_factored(n, m - 1) * _signed_factored(n, m + 1) - main
    return _report("thm41_shadow", {"n": n, "m": m}, reduce_mod_relation(raw), SHADOW_ANCHOR,
                   convention="sign=(-1)^C(m+1,2); mod w^2-z^2-1", details={"raw_zero": not raw})


SHIFT_ANCHOR = "U_m(b₁-1,b₂)U_m(b₁+1,b₂)(b₁²-b₂²) = (b₁²-b₂²)U_m² + 2z² D²U_m∘U_m"


def check_shift_recurrence(m: int, shift: int = DEFAULT_SHIFT) -> IdentityReport:
    """b₁ 平移递推，U_m(b₁, b₂) := U_{0,m-shift}(a = -4b₁², b = -4b₂²)"""
    base = umemura_index(m, shift)

    def at(first):
        return substitute(base, [PZ, PW, -4 * first ** 2, -4 * P2 ** 2], PB)

    U = at(P1)
    gap = P1 ** 2 - P2 ** 2
    raw = gap * at(P1 - 1) * at(P1 + 1) - gap * U ** 2 - 2 * PZ ** 2 * _hirota_square(U)
    return _report("thm49", {"m": m, "shift": shift}, reduce_mod_relation(raw), SHIFT_ANCHOR,
                   convention=f"shift={shift}; mod w^2-z^2-1", details={"raw_zero": not raw})


# ---------------------------------------------------------------------------
# 部分分式引理
# ---------------------------------------------------------------------------

ANSATZ_ANCHOR = "Σ± ∏(x+2+λ)/(x+2-λ) ∏(x-μ)/(x+μ) = 2 + Σ_{λ∈I∪J} b_λ/((x+2-λ)(x+λ))"
RESIDUE_SUM_ANCHOR = "Σ b_λ = 4(|I|-|J|)² - 4(|I|+|J|)"
VANISHING_ANCHOR = "b_λ = 0 ⇔ λ-2 ∈ I∩J (λ ∈ I∩J); b_λ = 0 ⇔ λ-2 ∈ J (λ ∈ I\\J)"


def _pair_params(I, J) -> dict:
    return {"I": list(getattr(I, "members", I)), "J": list(getattr(J, "members", J))}


def _coefficients(I, J) -> Tuple[Optional[Dict[int, Rational]], str]:
    try:
        return partial_fractions(I, J), ""
    except AnsatzInconsistent as e:
        return None, str(e)


def _format_coefficients(coefficients: Dict[int, Rational]) -> Dict[str, str]:
    return {str(lam): str(value) for lam, value in sorted(coefficients.items())}


def check_partial_fraction_ansatz(I, J) -> IdentityReport:
    params = _pair_params(I, J)
    coefficients, error = _coefficients(I, J)
    proper = (lemma_lhs(I, J) - URat.const(2)).is_proper()
    if coefficients is None or not proper:
        witness = error or "numerator - 2·denominator is not of lower degree"
        return IdentityReport("lemma42", params, FAIL, None, witness, ANSATZ_ANCHOR)
    return IdentityReport("lemma42", params, PASS, None, "", ANSATZ_ANCHOR,
                          details={"b": _format_coefficients(coefficients)})


def check_residue_sum(I, J) -> IdentityReport:
    """比较 Σ b_λ 与闭式；元素和与基数两种权重读法都计算"""
    params = _pair_params(I, J)
    coefficients, error = _coefficients(I, J)
    if coefficients is None:
        return IdentityReport("lemma43", params, FAIL, None, error, RESIDUE_SUM_ANCHOR)
    first, second = params["I"], params["J"]
    total = sum(coefficients.values(), QQ.zero)
    predictions = {
        "element-sum": 4 * (sum(first) - sum(second)) ** 2 - 4 * (sum(first) + sum(second)),
        "cardinality": 4 * (len(first) - len(second)) ** 2 - 4 * (len(first) + len(second)),
    }
    holding = [name for name, value in predictions.items() if value == total]
    details = {"sum": str(total), "predictions": predictions, "holding": holding}
    if "element-sum" in holding:
        return IdentityReport("lemma43", params, PASS, "element-sum", "", RESIDUE_SUM_ANCHOR, details=details)
    if holding:
        return IdentityReport("lemma43", params, CONDITIONAL, holding[0], "", RESIDUE_SUM_ANCHOR, details=details)
    witness = f"sum={total}, element-sum={predictions['element-sum']}, cardinality={predictions['cardinality']}"
    return IdentityReport("lemma43", params, FAIL, None, witness, RESIDUE_SUM_ANCHOR, details=details)


def check_vanishing_residues(I, J) -> IdentityReport:
    params = _pair_params(I, J)
    coefficients, error = _coefficients(I, J)
    if coefficients is None:
        return IdentityReport("lemma44", params, FAIL, None, error, VANISHING_ANCHOR)
    first, second = set(params["I"]), set(params["J"])
    both = first & second
    violations = []
    for lam in sorted(first):
        predicted_zero = (lam - 2) in (both if lam in both else second)
        actual_zero = coefficients[lam] == 0
        if predicted_zero != actual_zero:
            violations.append(f"λ={lam}: b={coefficients[lam]}, predicted {'zero' if predicted_zero else 'nonzero'}")
    status = FAIL if violations else PASS
    return IdentityReport("lemma44", params, status, None, "; ".join(violations), VANISHING_ANCHOR,
                          details={"b": _format_coefficients(coefficients)})


LEMMA_CHECKERS = {
    "lemma42": check_partial_fraction_ansatz,
    "lemma43": check_residue_sum,
    "lemma44": check_vanishing_residues,
}
SYMMETRIC_LEMMAS = ("lemma42", "lemma43")


def check_lemma_family(identity: str, n: int, m: int, seen: Set[tuple] = None) -> IdentityReport:
    """
    对基础集 [n;m] 的全部子集对运行一个引理检查，汇总为一份报告

    Args:
        seen: 已检查过的子集对，跨基础集共享以避免重复；
            lemma42 / lemma43 关于 I ↔ J 对称，按无序对记录，lemma44 按有序对记录
    """
    checker = LEMMA_CHECKERS[identity]
    seen = set() if seen is None else seen
    subsets = [s.members for s in ground_set(n, m).index_subsets()]
    checked = 0
    failures: List[IdentityReport] = []
    conditional = 0
    symmetric = identity in SYMMETRIC_LEMMAS
    for I, J in product(subsets, repeat=2):
        key = (identity, *sorted((I, J))) if symmetric else (identity, I, J)
        if key in seen:
            continue
        seen.add(key)
        checked += 1
        report = checker(I, J)
        if report.status == FAIL:
            failures.append(report)
        elif report.status == CONDITIONAL:
            conditional += 1
    status = FAIL if failures else (CONDITIONAL if conditional else PASS)
    witness = ""
    if failures:
        first = failures[0]
        witness = f"I={first.params['I']}, J={first.params['J']}: {first.witness_text}"
    return IdentityReport(identity, {"n": n, "m": m}, status, None, witness, checker_anchor(identity),
                          details={"pairs": checked, "failures": len(failures), "conditional": conditional})


def checker_anchor(identity: str) -> str:
    return {"lemma42": ANSATZ_ANCHOR, "lemma43": RESIDUE_SUM_ANCHOR, "lemma44": VANISHING_ANCHOR}[identity]


# ---------------------------------------------------------------------------
# 特殊参数
# ---------------------------------------------------------------------------

FACTORIZATION_ANCHOR = "U_{n,m}|_{b=a} = a_{[n;m]}(z+w)^{C(n+m+1,2)}(z-w)^{C(m+1,2)}"


def check_equal_parameter_factorization(n: int, m: int) -> IdentityReport:
    value = specialize(u_gen(n, m, 0), b=A)
    closed = x_factored(n, m)
    sign = factored_sign(m)
    details = {
        "zw_degree": zw_degree(value),
        "expected_degree": comb(n + m + 1, 2) + comb(m + 1, 2),
        "ground_weight": ground_set(n, m).weight,
    }
    return _report("eq42", {"n": n, "m": m}, value - closed * sign, FACTORIZATION_ANCHOR,
                   convention=f"sign=(-1)^C(m+1,2)={sign}", details=details)


ZERO_PARAMETER_ANCHOR = ("U_{n,m}(0,b₂) = b_{[n;m]odd} w^{(n/2)²} U_{0,m+n/2}(n/2,b₂) (n even); "
                         "b_{[n;m]odd} w^{((n+2m+1)/2)²} U_{0,(n-1)/2}(m+(n+1)/2,b₂) (n odd)")


def check_zero_parameter_reduction(n: int, m: int) -> IdentityReport:
    """a = 0 时 U_{n,m} 化为 n = 0 的族乘以 b 因子与 w 的幂"""
    if n < 1:
        raise ValueError(f"n 必须为正: {n}")
    left = specialize(u_gen(n, m, 0), a=0)
    odd = [i for i in ground_set(n, m).elements if i % 2]
    if n % 2 == 0:
        half = n // 2
        exponent, inner, a_value = half ** 2, u_gen(0, m + half, 0), -n ** 2
    else:
        exponent = ((n + 2 * m + 1) // 2) ** 2
        inner = u_gen(0, (n - 1) // 2, 0)
        a_value = -4 * (m + (n + 1) // 2) ** 2
    right = PARAM_B.of_set(odd) * W ** exponent * specialize(inner, a=a_value)
    details = {"lhs_w_degree": left.degree(W), "rhs_w_degree": right.degree(W)}
    return _report("lemma47", {"n": n, "m": m}, left - right, ZERO_PARAMETER_ANCHOR, details=details)


EMPTY_SUM_ANCHOR = "U^{(1)}_{0,m} = 0"


def check_empty_sum(m: int) -> IdentityReport:
    return _report("remark1", {"m": m}, u_gen(0, m, 1, allow_empty=True), EMPTY_SUM_ANCHOR)


RATIO_ANCHOR = "U^{(k)}_{k,m}·(2k+2m+1)!! = U^{(k+1)}_{k+2,m-1}·(2k+1)!!(2m-1)!!"


def check_double_factorial_ratio(k: int, m: int) -> IdentityReport:
    """
    两端都是对 J ⊆ {k+2, k+4, …, k+2m} 的求和，系数绝对值逐项相等，符号相差 (-1)^{#J}

    字面成立则 pass；右端每项再乘 (-1)^{#(I\\[k+1])} 后成立则 conditional
    """
    if m < 1:
        raise ValueError(f"m 必须 ≥ 1: {m}")
    lhs = u_gen(k, m, k) * double_factorial(2 * k + 2 * m + 1)
    scale = double_factorial(2 * k + 1) * double_factorial(2 * m - 1)
    rhs = u_gen(k + 2, m - 1, k + 1) * scale
    params = {"k": k, "m": m}
    if lhs == rhs:
        return _report("remark2", params, lhs - rhs, RATIO_ANCHOR)
    if lhs == u_gen(k + 2, m - 1, k + 1, free_sign=True) * scale:
        return IdentityReport("remark2", params, CONDITIONAL, "sign (-1)^#(I\\[k+1])", "", RATIO_ANCHOR,
                              details={"untwisted_difference": FormatUtils.to_text(lhs - rhs)})
    return _report("remark2", params, lhs - rhs, RATIO_ANCHOR)


INTEGRALITY_ANCHOR = "d_{n,m}(I) ∈ ℤ_{>0}"


def check_dcoef_integrality(n: int, m: int) -> IdentityReport:
    ground = ground_set(n, m)
    largest = 0
    count = 0
    for subset in ground.index_subsets():
        count += 1
        try:
            largest = max(largest, int(dcoef(subset)))
        except NonIntegerCoefficient as e:
            return IdentityReport("integrality", {"n": n, "m": m}, FAIL, None,
                                  f"I={subset}: d={e.value}", INTEGRALITY_ANCHOR)
    return IdentityReport("integrality", {"n": n, "m": m}, PASS, None, "", INTEGRALITY_ANCHOR,
                          details={"subsets": count, "largest": largest})


PLUCKER_ANCHOR = "b₁ = 0: U_{m+1}U_{m-1} - (2m+1)²U_m² = U_{2,m-1}²/(4b₂²)"


def check_plucker_conjecture(m: int, shift: int = DEFAULT_SHIFT) -> IdentityReport:
    """
    以去分母形式检查：-b·(U_{m+1}U_{m-1} - (2m+1)²U_m²) = U_{2,m-1}²，其中 a = 0, b = -4b₂²

    两端成比例时为 conditional，约定中记录比例常数
    """
    if m < 1:
        raise ValueError(f"m 必须 ≥ 1: {m}")

    def U(j):
        return specialize(umemura_index(j, shift), a=0)

    lhs = reduce_mod_relation(-B * (U(m + 1) * U(m - 1) - (2 * m + 1) ** 2 * U(m) ** 2))
    rhs = reduce_mod_relation(specialize(u_gen(2, m - 1, 0), a=0) ** 2)
    params = {"m": m, "shift": shift}
    details = {
        "lhs_zw_degree": zw_degree(lhs),
        "rhs_zw_degree": zw_degree(rhs),
        "depends_on_b_only": all(monom[2] == 0 for monom in (lhs - rhs).itermonoms()),
    }
    if lhs == rhs:
        return IdentityReport("conj51", params, PASS, f"shift={shift}", "", PLUCKER_ANCHOR, details=details)
    scale = proportionality(lhs, rhs)
    if scale is not None:
        return IdentityReport("conj51", params, CONDITIONAL, f"shift={shift}, scale={scale}", "",
                              PLUCKER_ANCHOR, details=details)
    return _report("conj51", params, lhs - rhs, PLUCKER_ANCHOR, convention=f"shift={shift}", details=details)


# ---------------------------------------------------------------------------
# 套件
# ---------------------------------------------------------------------------

def _pairs(max_n: int, max_m: int, limit: Callable[[int, int], bool] = lambda n, m: True,
           n_from: int = 0, m_from: int = 0) -> List[Tuple[int, int]]:
    return [(n, m) for n in range(n_from, max_n + 1) for m in range(m_from, max_m + 1) if limit(n, m)]


def _within(bounds: SuiteBounds, value: int) -> bool:
    return bounds.max_total is None or value <= bounds.max_total


def _plan(identity: str, bounds: SuiteBounds, shift: int) -> List[Callable[[], IdentityReport]]:
    """把一个恒等式的检查范围展开为按参数升序排列的任务列表"""
    if identity == "thm41":
        return [lambda n=n, m=m: check_bilinear_recurrence(n, m) for n, m in _pairs(bounds.max_n, bounds.max_m)]
    if identity == "thm41_shadow":
        return [lambda n=n, m=m: check_factored_shadow(n, m) for n, m in _pairs(bounds.max_n, bounds.max_m)]
    if identity == "thm49":
        return [lambda m=m: check_shift_recurrence(m, shift) for m in range(max(shift - 1, 0), bounds.max_m + 1)]
    if identity in LEMMA_CHECKERS:
        seen: Set[tuple] = set()
        cases = _pairs(bounds.max_n, bounds.max_m, lambda n, m: _within(bounds, n + 2 * m))
        return [lambda n=n, m=m: check_lemma_family(identity, n, m, seen) for n, m in cases]
    if identity == "eq42":
        cases = _pairs(bounds.max_n, bounds.max_m, lambda n, m: _within(bounds, n + m))
        return [lambda n=n, m=m: check_equal_parameter_factorization(n, m) for n, m in cases]
    if identity == "lemma47":
        cases = _pairs(bounds.max_n, bounds.max_m, n_from=1)
        return [lambda n=n, m=m: check_zero_parameter_reduction(n, m) for n, m in cases]
    if identity == "remark1":
        return [lambda m=m: check_empty_sum(m) for m in range(bounds.max_m + 1)]
    if identity == "remark2":
        cases = _pairs(bounds.max_n, bounds.max_m, m_from=1)
        return [lambda k=k, m=m: check_double_factorial_ratio(k, m) for k, m in cases]
    if identity == "integrality":
        cases = _pairs(bounds.max_n, bounds.max_m, lambda n, m: _within(bounds, n + 2 * m))
        return [lambda n=n, m=m: check_dcoef_integrality(n, m) for n, m in cases]
    if identity == "conj51":
        return [lambda m=m: check_plucker_conjecture(m, shift) for m in range(max(1, shift), bounds.max_m + 1)]
    raise KeyError(f"未知恒等式: {identity}")


IDENTITY_IDS = ("integrality", "eq42", "remark1", "remark2", "lemma42", "lemma43", "lemma44",
                "thm41", "thm41_shadow", "lemma47", "thm49", "conj51")


def run_suite(
        bounds: Mapping[str, SuiteBounds],
        shift: int = DEFAULT_SHIFT,
        progress_callback: Optional[Callable[[int, int, str], None]] = None,
        timing: bool = False,
) -> List[IdentityReport]:
    """
    按 IDENTITY_IDS 的固定顺序运行 bounds 中列出的恒等式

    Args:
        bounds: 恒等式 id → 检查范围；空映射得到空列表
        shift: Umemura 指标平移（thm49、conj51 使用）
        progress_callback: 进度回调 (当前, 总数, 描述)
        timing: 为 True 时记录 wall_time_ms（默认不记录，保证输出逐字节可复现）
    """
    unknown = set(bounds) - set(IDENTITY_IDS)
    if unknown:
        raise KeyError(f"未知恒等式: {sorted(unknown)}")

    tasks = []
    for identity in IDENTITY_IDS:
        if identity in bounds:
            tasks.extend((identity, task) for task in _plan(identity, bounds[identity], shift))

    reports = []
    for index, (identity, task) in enumerate(tasks):
        started = time.perf_counter()
        report = task()
        if timing:
            report.wall_time_ms = int((time.perf_counter() - started) * 1000)
        reports.append(report)
        if progress_callback:
            progress_callback(index + 1, len(tasks), f"{identity} {report.params} {report.status}")
    return reports


def summarize(reports: Iterable[IdentityReport]) -> Dict[str, int]:
    counts = {PASS: 0, FAIL: 0, CONDITIONAL: 0}
    for report in reports:
        counts[report.status] += 1
    return counts


def unexpected_failures(reports: Iterable[IdentityReport], known: Iterable[str]) -> List[IdentityReport]:
    known = set(known)
    return [r for r in reports if r.status == FAIL and r.id not in known]


def suite_document(reports: Sequence[IdentityReport], known: Iterable[str] = (), schema: int = 1) -> dict:
    """JSON 报告文档（键顺序固定）"""
    known = sorted(set(known))
    return {
        "schema": schema,
        "summary": summarize(reports),
        "known_discrepancies": known,
        "unexpected_failures": len(unexpected_failures(reports, known)),
        "reports": [r.to_dict() for r in reports],
    }
