"""
精确多项式运算测试
"""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.domains import QQ

from core.Errors import DivisionByZero, NotDivisible
from core.ExactPoly import (A, B, W, Z, ZW, URat, X_SYMBOL, common_denominator, delta, exact_div, from_terms,
                            hirota2, lemma_lhs, partial_fractions, poly_arith, proportionality, qq,
                            reduce_mod_relation, specialize, to_sympy, total_degree)
from core.Umemura import u_gen
from utils.FormatUtils import FormatUtils

PROPERTY = settings(derandomize=True, deadline=None, max_examples=30)

monomials = st.tuples(*(st.integers(0, 3) for _ in range(4)))
rationals = st.builds(QQ, st.integers(-20, 20), st.integers(1, 4))
polynomials = st.dictionaries(monomials, rationals, max_size=4).map(from_terms)


def test_delta_on_generators():
    """δz = w/2，δw = z/2，参数为常数"""
    assert delta(Z) == W * QQ(1, 2)
    assert delta(W) == Z * QQ(1, 2)
    assert not delta(A * B)


def test_hirota_of_z():
    """D²(z∘z) = 2(z·z'' - z'²) = (z² - w²)/2"""
    assert hirota2(Z, Z) == (Z ** 2 - W ** 2) * QQ(1, 2)


def test_reduce_mod_relation_lowers_w():
    assert reduce_mod_relation(W ** 2) == Z ** 2 + 1
    assert reduce_mod_relation(W ** 3) == W * Z ** 2 + W
    assert reduce_mod_relation(W ** 2 - Z ** 2 - 1) == ZW.zero


def test_poly_arith_operations():
    p, q = Z + W, Z - W
    assert poly_arith(p, q, "add") == 2 * Z
    assert poly_arith(p, q, "sub") == 2 * W
    assert poly_arith(p, q, "mul") == Z ** 2 - W ** 2
    assert poly_arith(p, None, "scale", QQ(1, 3)) == p * QQ(1, 3)
    with pytest.raises(ValueError):
        poly_arith(p, q, "pow")


def test_exact_div():
    assert exact_div((Z + W) * (Z - W), Z + W) == Z - W
    with pytest.raises(NotDivisible) as info:
        exact_div(Z, W)
    assert info.value.remainder == Z
    with pytest.raises(DivisionByZero):
        exact_div(Z, ZW.zero)


def test_qq_rejects_float():
    with pytest.raises(TypeError):
        qq(0.5)


def test_degree_and_denominator_helpers():
    p = Z ** 2 * A * QQ(1, 6) + W * QQ(3, 4)
    assert total_degree(p) == 3
    assert total_degree(ZW.zero) == -1
    assert common_denominator(p) == 12


def test_proportionality():
    assert proportionality(3 * (Z + A), Z + A) == 3
    assert proportionality(Z + 2 * A, Z + A) is None
    assert proportionality(Z, ZW.zero) is None


def test_specialize():
    U = u_gen(0, 1, 0)
    assert specialize(U, b=A) == (A + 1) * (W ** 2 - Z ** 2)
    assert specialize(U, a=0, b=0) == W ** 2 - Z ** 2


def test_rational_conversions():
    assert qq("3/4") == QQ(3, 4)
    assert qq(to_sympy(QQ(-5, 6))) == QQ(-5, 6)
    assert str(proportionality(Z * QQ(1, 2), Z)) == "1/2"


def test_urat_normalization():
    x = X_SYMBOL
    value = URat.of(2 * x + 2, 4 * x ** 2 - 4)
    assert value == URat.of(1, 2 * x - 2)
    assert value.den.LC() == 1
    assert (value - value).is_zero
    with pytest.raises(DivisionByZero):
        URat.of(x, 0)


def test_lemma_lhs_is_two_at_empty_sets():
    assert lemma_lhs((), ()) == URat.const(2)


@pytest.mark.parametrize("I, J, expected", [
    ((2,), (), {2: QQ(8)}),
    ((2,), (2,), {2: QQ(-16)}),
    ((2, 4), (2, 4), {2: QQ(-48), 4: QQ(0)}),
    ((1,), (), {1: QQ(0)}),
    ((1,), (1,), {1: QQ(-8)}),
    ((), (), {}),
])
def test_partial_fractions_values(I, J, expected):
    assert partial_fractions(I, J) == expected


def test_partial_fractions_symmetric():
    assert partial_fractions((2,), ()) == partial_fractions((), (2,))


# ---------------------------------------------------------------------------
# 格式化
# ---------------------------------------------------------------------------

def test_text_format_constants():
    assert FormatUtils.to_text(ZW.zero) == "0"
    assert FormatUtils.to_text(ZW.one) == "1"
    assert FormatUtils.to_text(Z * QQ(-1, 2)) == "-1/2*z"


def test_text_and_json_parse_back():
    U = u_gen(1, 1, 0)
    assert FormatUtils.from_text(FormatUtils.to_text(U)) == U
    assert FormatUtils.from_json(FormatUtils.to_json(U)) == U


def test_json_rejects_foreign_variables():
    data = FormatUtils.to_json(Z)
    data["variables"] = ["x", "y", "a", "b"]
    with pytest.raises(ValueError):
        FormatUtils.from_json(data)


def test_latex_uses_parameter_bars():
    text = FormatUtils.to_latex(u_gen(0, 1, 0))
    assert r"\bar{b}_{2}" in text
    assert r"\bar{a}_{2}" in text
    assert text.startswith("-")


# ---------------------------------------------------------------------------
# 性质测试
# ---------------------------------------------------------------------------

@PROPERTY
@given(polynomials, polynomials, polynomials)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r


@PROPERTY
@given(polynomials, polynomials)
def test_delta_leibniz(p, q):
    assert delta(p * q) == delta(p) * q + p * delta(q)


@PROPERTY
@given(polynomials, polynomials, polynomials)
def test_hirota_symmetric_and_bilinear(f, g, h):
    assert hirota2(f, g) == hirota2(g, f)
    assert hirota2(f + h, g) == hirota2(f, g) + hirota2(h, g)


@PROPERTY
@given(polynomials, polynomials)
def test_reduce_idempotent_and_branch_invariant(p, q):
    reduced = reduce_mod_relation(p)
    assert reduce_mod_relation(reduced) == reduced
    assert reduced.degree(W) <= 1
    assert reduce_mod_relation(p + (W ** 2 - Z ** 2 - 1) * q) == reduced
