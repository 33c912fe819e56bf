from fractions import Fraction

import pytest

from gue_index.algebra import SIGMA, PiScalar, Poly, RationalFunction, XiFunction, expand_at_one
from gue_index.tau import (
    a1_closed_form,
    barnes_g,
    build_fg,
    build_tau,
    e1_closed_form,
    expand_w_at_one,
    g_second_derivative_at_one,
    index_distribution,
    laurent_table,
    tau_at_one_closed_form,
    tau_hankel_direct,
    verify_identities,
    verify_laurent,
    xi_from_w,
)

XI = XiFunction.xi()


@pytest.fixture(scope="module")
def tau():
    return build_tau(12)


@pytest.fixture(scope="module")
def fg():
    return build_fg(10)


def test_tau_small_cases(tau):
    assert tau[0] == 1
    assert tau[1] == SIGMA * (XI + 1) / 2
    assert tau[2] == (SIGMA * SIGMA * (XI + 1) ** 2 - 2 * (XI - 1) ** 2) / 2


@pytest.mark.parametrize("n", range(0, 6))
def test_reduced_tau_matches_direct_hankel(tau, n):
    assert tau[n] == tau_hankel_direct(n)


@pytest.mark.parametrize("n", range(0, 13))
def test_tau_degree_and_value_at_one(tau, n):
    assert tau.polynomial(n).degree == n
    assert tau.at_one(n) == tau_at_one_closed_form(n)
    assert tau[n](PiScalar(1)) == tau.at_one(n)


def test_barnes_g():
    assert [barnes_g(k) for k in range(1, 7)] == [1, 1, 1, 2, 12, 288]


def test_build_tau_rejects_negative():
    with pytest.raises(ValueError):
        build_tau(-1)
    with pytest.raises(ValueError):
        index_distribution(-2)


def test_distribution_n2_closed_form(tau):
    d = index_distribution(2, tau)
    q = PiScalar(Fraction(1, 4)) - PiScalar(Fraction(1, 2)) / PiScalar.pi()
    assert d[0] == q and d[2] == q
    assert d[1] == 1 - 2 * q
    assert d.variance() == PiScalar(Fraction(1, 2)) - 1 / PiScalar.pi()


@pytest.mark.parametrize("n", range(0, 13))
def test_distribution_invariants(tau, n):
    d = index_distribution(n, tau)
    assert d.total() == 1
    assert d.mean() == Fraction(n, 2)
    assert all(d[k] == d[n - k] for k in range(n + 1))
    assert all(p > 0 for p in d.numeric(30))


def test_xi_from_w_roundtrip():
    # w = (xi-1)/(sigma(xi+1)) itself
    w = RationalFunction(Poly((Fraction(0), Fraction(1))))
    assert xi_from_w(w) == (XI - 1) / (SIGMA * (XI + 1))
    assert xi_from_w(RationalFunction(Poly((Fraction(1),))), weight=2) == (SIGMA * (XI + 1)) ** 2
    assert not xi_from_w(RationalFunction(Poly()))


@pytest.mark.parametrize(
    "num,den",
    [((1, 2, 3), (1,)), ((Fraction(1, 3), 0, 1), (0, 1)), ((2, 5), (1, -1, 4)), ((0, 0, 1), (0, 1, 1))],
)
def test_expand_w_at_one_matches_generic(num, den):
    f = RationalFunction(Poly(map(Fraction, num)), Poly(map(Fraction, den)))
    fast = expand_w_at_one(f, 3)
    slow = expand_at_one(xi_from_w(f), 3)
    for j in range(min(fast.min_order, slow.min_order), 4):
        assert fast[j] == slow[j]


def test_identity_suite_small(tau, fg):
    rep = verify_identities(8, tau, fg)
    assert rep.ok, [c.line() for c in rep.failures()]
    assert {"tau_recurrence", "g_recurrence", "f_sum_zero", "g_product_equals_tau_ratio"} <= set(rep.names())


def test_fg_triple_constraints_in_w(fg, tau):
    for n in range(1, 10):
        f0, f1, f2 = fg.f_w[n]
        assert not (f0 + f1 + f2)
        assert fg.g_w[n] == f1 * f2
        tn = tau.T(n)
        assert fg.g_w[n] == RationalFunction(tau.T(n + 1) * tau.T(n - 1), tn * tn) - 2 * n


def test_fg_triple_constraints_in_xi(fg, tau):
    # independent of the reduced variable; xi-side arithmetic is only cheap for small n
    for n in (1, 2):
        t = fg.triple(n)
        assert not (t.f0 + t.f1 + t.f2)
        assert fg.g(n) == t.f1 * t.f2
        assert fg.g(n) == -2 * n + tau[n + 1] * tau[n - 1] / tau[n] ** 2


def test_g_vanishes_at_one_to_second_order(fg):
    for n in range(1, 8):
        s = expand_at_one(fg.g(n), 1)
        assert s[0] == 0 and s[1] == 0


def test_g_second_derivative_links_to_variance(fg):
    # g_1''(1) = 2 (Delta_2 + Delta_0 - 2 Delta_1) with Delta_0 = 0, Delta_1 = 1/4
    rhs = 2 * (PiScalar(Fraction(1, 2)) - 1 / PiScalar.pi() - PiScalar(Fraction(1, 2)))
    assert g_second_derivative_at_one(fg, 1) == rhs


def test_laurent_table_closed_forms():
    rows = laurent_table(3)
    for r in rows:
        assert r.A1 == a1_closed_form(r.m)
        assert r.E1 == e1_closed_form(r.m)
        assert r.A1 + r.C1 == -r.E1
    assert rows[0].A1 == 0


def test_verify_laurent_report():
    rep = verify_laurent(3)
    assert rep.ok, [c.line() for c in rep.failures()]
    assert all(c.label == "m" for c in rep.checks if c.name.endswith("closed_form"))
