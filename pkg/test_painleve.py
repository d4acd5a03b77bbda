"""
Painlevé 数值验证测试
"""
import pytest
from mpmath import mp, mpf

from core.Errors import BranchDomain, SingularSample
from core.ExactPoly import delta
from core.Painleve import (BVector, ResidualSettings, check_hamiltonian_seed, eval_mpoly, eval_point, evi_residual,
                           first_derivative, h0, pvi_residual, residual_table, second_derivative, seed_p, seed_q,
                           stencil_order_ratio)
from core.Umemura import EXTENDED_VARIABLES, NUMERIC_VARIABLES, u_gen


def test_eval_point_at_two():
    with mp.workdps(30):
        point = eval_point(2)
        v = 3 / mp.sqrt(2)
        assert abs(4 * point.z ** 2 + 2 - v) < 1e-25
        assert abs(4 * point.w ** 2 - 2 - v) < 1e-25
        assert abs(point.w ** 2 - point.z ** 2 - 1) < 1e-25
        assert abs(point.x - mp.log(2) / 2) < 1e-25
        assert abs(point.z - mp.sinh(point.x / 2)) < 1e-25
        assert abs(point.w - mp.cosh(point.x / 2)) < 1e-25


@pytest.mark.parametrize("t", ["1.5", 3, 10])
def test_eval_point_hyperbolic_map(t):
    with mp.workdps(30):
        point = eval_point(t)
        assert abs(mp.exp(2 * point.x) - point.t / (point.t - 1)) < 1e-25
        assert abs(2 * mp.cosh(point.x) - (4 * point.z ** 2 + 2)) < 1e-25
        assert point.z > 0 and point.w > 1


def test_eval_point_uses_resolver_identification():
    z2, w2 = EXTENDED_VARIABLES[NUMERIC_VARIABLES]
    with mp.workdps(30):
        point = eval_point(3)
        v = mp.sqrt(mpf(3) / 2) + mp.sqrt(mpf(2) / 3)
        assert abs(point.z ** 2 - eval_mpoly(z2, (v, 0, 0))) < 1e-25
        assert abs(point.w ** 2 - eval_mpoly(w2, (v, 0, 0))) < 1e-25


@pytest.mark.parametrize("t", [1, "0.5", -3])
def test_eval_point_branch_domain(t):
    with pytest.raises(BranchDomain):
        eval_point(t)


def test_eval_mpoly():
    U = u_gen(0, 1, 0)
    assert eval_mpoly(U, (mpf(0), mpf(1), mpf(0), mpf(2))) == 3


def test_derivative_stencils():
    with mp.workdps(30):
        assert abs(first_derivative(mp.sin, mpf("0.5"), mpf("1e-3")) - mp.cos(mpf("0.5"))) < 1e-12
        assert abs(second_derivative(mp.sin, mpf("0.5"), mpf("1e-3")) + mp.sin(mpf("0.5"))) < 1e-9


def test_stencil_order_ratio_on_exponential():
    ratio = stencil_order_ratio(mp.exp, 1, mp.e, step="1e-2")
    assert 14 < ratio < 18


def test_log_derivative_matches_delta():
    """t(t-1) d/dt log U = -½δU/U"""
    U = u_gen(0, 1, 0)
    dU = delta(U)
    a, b = -4 * mpf("0.09"), -4 * mpf("0.04")

    def log_u(t):
        point = eval_point(t)
        return mp.log(eval_mpoly(U, (point.z, point.w, a, b)))

    with mp.workdps(30):
        t = mpf(2)
        point = eval_point(t)
        values = (point.z, point.w, a, b)
        numeric = t * (t - 1) * first_derivative(log_u, t, mpf("1e-5"))
        exact = -eval_mpoly(dU, values) / (2 * eval_mpoly(U, values))
        assert abs(numeric - exact) < 1e-12


def test_bvector_parameters():
    alpha, beta, gamma, delta_ = BVector(1, 0, 0, 0).pvi_parameters()
    assert (alpha, beta, gamma, delta_) == (0, mpf(-1) / 2, mpf(1) / 2, 0)
    assert BVector(1, 1, 1, 1).e2_offset() == 0


def test_h0_variants_differ():
    assert h0(2, 0, 0) == 0
    assert h0(2, "0.3", "0.2") != h0(2, "0.3", "0.2", variant="printed")


def test_closed_form_energy_residual():
    """h = -(2t-1)(m+1)²/2 满足 b = (0, m+1, b3, b4) 的方程，两种括号读法都为零"""
    m = 1
    b = BVector(0, m + 1, "0.5", "0.25")

    def h(t):
        return -(2 * t - 1) * (m + 1) ** 2 / 2

    for squared in (False, True):
        assert evi_residual(h, b, 2, squared) < 1e-9


def test_seed_hamiltonian_residuals():
    dq, dp = check_hamiltonian_seed("0.3", "0.2", 2)
    assert dq < 1e-5
    assert dp < 1e-5


def test_seed_negative_control():
    dq, _ = check_hamiltonian_seed("0.3", "0.2", 2, p_shift="0.1")
    assert dq > 1e-3


def test_seed_values():
    with mp.workdps(30):
        q = seed_q(2, "0.3", "0.2")
        expected = (mpf("0.25") * 2 - mpf("0.05") * mp.sqrt(2)) / mpf("0.49")
        assert abs(q - expected) < 1e-25
        assert abs(seed_p(2, "0.3", "0.2") - (mpf("0.3") * q - mpf("0.25")) / (q * (q - 1))) < 1e-25


def test_pvi_residual_rejects_singular_sample():
    with pytest.raises(SingularSample):
        pvi_residual(lambda t: t, BVector(0, 0, 0, 0).pvi_parameters(), 2)


def test_residual_table_closed_form_case():
    rows = residual_table("prop46ii", [2, 3], ResidualSettings(m=1))
    assert [row["t"] for row in rows] == [2.0, 3.0]
    for row in rows:
        assert row["b_vector"] == [0.0, 2.0, 0.5, 0.25]
        assert row["residual_printed_bracket"] < 1e-9
        assert row["residual_squared_bracket"] < 1e-9
        assert "closed_form_gap" in row


def test_residual_table_seed_columns():
    rows = residual_table("seed", [2], ResidualSettings(b1=0.3, b2=0.2))
    assert len(rows) == 8
    assert {row["pvi_sign"] for row in rows} == {"printed", "standard"}
    corrected = [row for row in rows if row["variant"] == "corrected" and row["branch"] == 1]
    assert all(row["dq_residual"] < 1e-5 and row["dp_residual"] < 1e-5 for row in corrected)


def test_residual_table_validates_before_computing():
    with pytest.raises(BranchDomain):
        residual_table("prop46i", [2, "0.5"])
    with pytest.raises(ValueError):
        residual_table("prop99", [2])


def test_residual_table_is_deterministic():
    settings = ResidualSettings(m=1, b1=0.3, b2=0.2)
    assert residual_table("prop46i", [2], settings) == residual_table("prop46i", [2], settings)


def _vanishing_row(rows, **labels):
    matches = [row for row in rows if all(row.get(k) == v for k, v in labels.items())]
    assert len(matches) == 1
    return matches[0]


def test_energy_case_tight_residual():
    rows = residual_table("prop46i", [2], ResidualSettings(m=1))
    row = _vanishing_row(rows, index_shift=0, h0="corrected")
    assert row["residual_squared_bracket"] < 1e-15


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("t", ["1.5", 2, 3])
def test_energy_case_over_grid(m, t):
    rows = residual_table("prop46i", [t], ResidualSettings(m=m))
    assert all("error" not in row for row in rows)
    row = _vanishing_row(rows, index_shift=0, h0="corrected")
    assert row["residual_squared_bracket"] < 1e-12


@pytest.mark.parametrize("m", [0, 1, 2, 3])
@pytest.mark.parametrize("t", ["1.5", 2, 3])
def test_closed_form_case_over_grid(m, t):
    (row,) = residual_table("prop46ii", [t], ResidualSettings(m=m))
    assert row["closed_form_gap"] < 1e-15
    assert row["residual_printed_bracket"] < 1e-9
    assert row["residual_squared_bracket"] < 1e-9


@pytest.mark.parametrize("n, m", [(1, 0), (1, 1), (1, 2), (1, 3), (2, 0), (3, 0)])
@pytest.mark.parametrize("b2", ["0.2", "1.3"])
def test_zero_b1_case(n, m, b2):
    for t in ("1.5", 2, 3):
        rows = residual_table("prop46iii", [t], ResidualSettings(n=n, m=m, b2=float(b2)))
        row = _vanishing_row(rows, h0="corrected")
        assert row["residual_squared_bracket"] < 1e-12


@pytest.mark.parametrize("t", ["1.5", 2, 3])
def test_seed_over_grid(t):
    rows = residual_table("seed", [t], ResidualSettings(b1=0.3, b2=0.2))
    corrected = [row for row in rows if row["variant"] == "corrected" and row["branch"] == 1]
    assert corrected
    assert all(row["dq_residual"] < 1e-9 and row["dp_residual"] < 1e-9 for row in corrected)


def test_qm_table_layout():
    rows = residual_table("sec5-qm", [2], ResidualSettings(m=1))
    assert len(rows) == 15
    assert {row.get("source") for row in rows} == {"u_gen", "toda"}
    assert {row.get("kind") for row in rows} == {"pvi", "hbar"}
    assert sum(row.get("kind") == "hbar" for row in rows) == 3


@pytest.mark.xfail(strict=False, reason="q_m 的归一化尚未确认给出小残差，记为已知数值不符")
def test_qm_residual_is_small():
    rows = residual_table("sec5-qm", [2], ResidualSettings(m=1))
    pvi = [row["pvi_residual"] for row in rows if row.get("kind") == "pvi"]
    assert min(pvi) < 1e-9
