from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from gue_index.algebra import SIGMA
from gue_index.special import PrecisionContext
from gue_index.tau import build_tau
from gue_index.variance import (
    VarianceValue,
    auxd_residual,
    central_square,
    delta_asymptotic,
    delta_beta_integral,
    delta_closed_form,
    delta_from_distribution,
    delta_recurrence_table,
    delta_sum,
    delta_sum_table,
    delta_voisum,
    e_term,
    even_odd_holds,
    gamma_ratio_series,
    homogeneous_check,
    j_m_closed,
    j_m_closed_dm,
    j_m_quadrature,
)

CTX = PrecisionContext(working_digits=40, quadrature_tolerance=1e-25)


def test_small_values():
    assert delta_sum(0).key() == (0, 0)
    assert delta_sum(1).key() == (Fraction(1, 4), 0)
    assert delta_sum(2).key() == (Fraction(1, 2), -1)
    assert delta_sum(4).key() == (1, Fraction(-29, 12))


def test_negative_n_rejected():
    for fn in (delta_sum, delta_voisum, delta_from_distribution):
        with pytest.raises(ValueError):
            fn(-1)
    with pytest.raises(ValueError):
        delta_recurrence_table(4)
    with pytest.raises(ValueError):
        delta_closed_form(1)
    with pytest.raises(ValueError):
        delta_asymptotic(4)


def test_value_formatting_and_roundtrip():
    v = delta_sum(3)
    assert str(v) == "3/4 - 3/(2·π)"
    assert str(delta_sum(2)) == "1/2 - 1/π"
    assert str(delta_sum(1)) == "1/4"
    assert VarianceValue.from_piscalar(3, v.to_piscalar()).key() == v.key()
    d = v.to_dict(20)
    assert d["rat"] == "3/4" and d["inv_pi"] == "-3/2" and d["method"] == "sum"
    with mp.workdps(40):
        assert abs(v.decimal(30) - (mpf(3) / 4 - mpf(3) / (2 * mp.pi))) < mpf(10) ** -29


def test_from_piscalar_rejects_other_shapes():
    with pytest.raises(ValueError):
        VarianceValue.from_piscalar(1, SIGMA)
    with pytest.raises(ValueError):
        VarianceValue.from_piscalar(1, 1 / SIGMA)
    with pytest.raises(ValueError):
        VarianceValue.from_piscalar(1, 1 / (SIGMA ** 2 + 1))


def test_table_matches_single_values():
    table = delta_sum_table(40)
    assert [v.key() for v in table] == [delta_sum(n).key() for n in range(41)]


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=400))
def test_sum_and_voisum_agree(n):
    assert delta_sum(n).same_value(delta_voisum(n))


def test_distribution_route():
    tau = build_tau(14)
    for n in range(0, 15):
        assert delta_from_distribution(n, tau).same_value(delta_sum(n))


def test_recurrence_table_route():
    rec = delta_recurrence_table(60)
    assert [v.n for v in rec] == list(range(2, 61))
    assert all(v.same_value(delta_sum(v.n)) for v in rec)


def test_even_odd_and_third_order_relations():
    vals = {v.n: v for v in delta_sum_table(60)}
    for m in range(1, 29):
        assert even_odd_holds(vals[2 * m], vals[2 * m + 1])
    for n in range(2, 59):
        assert auxd_residual(vals, n) == (0, 0)
    with pytest.raises(ValueError):
        even_odd_holds(vals[3], vals[4])


def test_e_term():
    assert e_term(0).value == -1
    assert e_term(1).value == Fraction(-1, 4)
    assert central_square(2) == Fraction(9, 64)
    with pytest.raises(ValueError):
        e_term(-1)


def test_variance_positive_and_growing():
    table = delta_sum_table(80)
    dec = [v.decimal(30) for v in table]
    assert all(x > 0 for x in dec[1:])
    assert all(dec[n + 2] > dec[n] for n in range(len(dec) - 2))


def test_j1_closed_form():
    with mp.workdps(50):
        assert abs(j_m_closed(1, CTX) - mp.pi ** 2 / 2) < mpf(10) ** -24


def test_jm_derivative_matches_difference_quotient():
    with mp.workdps(50):
        h = mpf(10) ** -7
        fd = (j_m_closed(3 + h, CTX) - j_m_closed(3 - h, CTX)) / (2 * h)
        assert abs(j_m_closed_dm(3, CTX) - fd) < mpf(10) ** -11


@pytest.mark.parametrize("n", [2, 3, 7, 12])
def test_closed_form_against_exact(n):
    with mp.workdps(50):
        err = abs(delta_closed_form(n, CTX) - delta_sum(n).decimal(40))
        assert err < mpf(10) ** -20


def test_asymptotic_error_decreases():
    with mp.workdps(70):
        errs = [abs(delta_asymptotic(2 * k) - delta_sum(2 * k).decimal(64)) for k in (5, 10, 20, 40)]
    assert errs == sorted(errs, reverse=True)
    assert errs[-1] < 1e-10


def test_asymptotic_log_argument():
    # log(8k) in place of log(16k) leaves an O(1/pi^2 log 2) offset at every k
    with mp.workdps(70):
        exact = delta_sum(80).decimal(64)
        good = abs(delta_asymptotic(80) - exact)
        bad = abs(delta_asymptotic(80, log_factor=8) - exact)
    assert good < 1e-12 < 1e-2 < bad


@pytest.mark.parametrize("route", ["beta", "sinh"])
def test_quadrature_m2(route):
    with mp.workdps(50):
        assert abs(j_m_quadrature(2, route, CTX) - j_m_closed(2, CTX)) < mpf(10) ** -20


def test_quadrature_bad_route():
    with pytest.raises(ValueError):
        j_m_quadrature(1, "cosh", CTX)
    with pytest.raises(ValueError):
        j_m_quadrature(0, "beta", CTX)


def test_beta_integral_reproduces_variance():
    with mp.workdps(50):
        assert abs(delta_beta_integral(4, CTX) - delta_sum(4).decimal(40)) < mpf(10) ** -20
    with pytest.raises(ValueError):
        delta_beta_integral(1, CTX)


def test_gamma_ratio_series():
    with mp.workdps(50):
        assert abs(gamma_ratio_series(CTX) - mp.pi ** 2 / 2) < mpf(10) ** -20


def test_homogeneous_solutions():
    rep = homogeneous_check(6, CTX)
    assert rep.ok, [c.line() for c in rep.failures()]
    with pytest.raises(ValueError):
        homogeneous_check(2, CTX)
