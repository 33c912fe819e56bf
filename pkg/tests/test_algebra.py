from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from gue_index.algebra import (
    SIGMA,
    LaurentSeries,
    PiScalar,
    Poly,
    RationalFunction,
    XiFunction,
    bareiss_det,
    eval_numeric,
    expand_at_one,
    gamma_half,
)

fractions = st.builds(Fraction, st.integers(-60, 60), st.integers(1, 12))
polys = st.lists(fractions, max_size=5).map(Poly)
nonzero_polys = st.lists(fractions, min_size=1, max_size=4).map(lambda c: Poly(c + [Fraction(1)]))
scalars = st.builds(PiScalar, polys, nonzero_polys)


def test_poly_trims_and_degree():
    p = Poly([1, 2, 0, 0])
    assert p.coeffs == (1, 2)
    assert p.degree == 1
    assert Poly().degree < 0
    assert not Poly([0, 0])


def test_poly_divmod_roundtrip():
    a = Poly([Fraction(1), 2, 3, 4])
    b = Poly([Fraction(-1), 1])
    r = a % b
    assert r.degree < b.degree
    assert (a - r).exquo(b) * b == a - r


def test_poly_gcd_is_monic_common_factor():
    x1 = Poly([Fraction(-1), 1])
    a = x1 * Poly([Fraction(2), 1])
    b = x1 * Poly([Fraction(3), 5])
    assert Poly.gcd(a, b) == x1


def test_poly_shift_and_derivative():
    p = Poly([Fraction(0), 0, 1])  # x^2
    assert p.shift(1) == Poly([Fraction(1), 2, 1])
    assert p.deriv() == Poly([0, 2])


def test_bareiss_matches_cofactor_expansion():
    m = [[Fraction(2), 1, 3], [Fraction(0), -1, 4], [Fraction(5), 2, 1]]
    assert bareiss_det(m) == 2 * (-1 - 8) - 1 * (0 - 20) + 3 * (0 + 5)
    assert bareiss_det([]) == 1
    assert bareiss_det([[0, 1], [1, 0]]) == -1
    assert bareiss_det([[0, 0], [1, 0]]) == 0


def test_bareiss_on_polynomial_entries():
    x = Poly([0, 1])
    m = [[x, Poly([1])], [Poly([1]), x]]
    assert bareiss_det(m) == Poly([-1, 0, 1])


def test_piscalar_canonical_form():
    a = PiScalar(Poly([0, 2]), Poly([0, 0, 4]))  # 2σ / 4σ^2
    assert a == PiScalar(Fraction(1, 2)) / SIGMA
    assert a.den.lead == 1


def test_piscalar_pi_is_sigma_squared():
    assert PiScalar.pi() == SIGMA * SIGMA
    assert PiScalar.sigma(-2) * PiScalar.pi() == 1


def test_piscalar_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        SIGMA / 0
    with pytest.raises(ZeroDivisionError):
        PiScalar(1, 0)


def test_piscalar_parse_roundtrip_examples():
    for x in (PiScalar(0), PiScalar(Fraction(-3, 7)), SIGMA ** 3 - 2, (SIGMA + 1) / (SIGMA ** 2 - 3)):
        assert PiScalar.parse(str(x)) == x
    with pytest.raises(ValueError):
        PiScalar.parse("σ*#")


@settings(max_examples=60, deadline=None)
@given(scalars)
def test_piscalar_parse_roundtrip(x):
    assert PiScalar.parse(str(x)) == x


@settings(max_examples=60, deadline=None)
@given(scalars, scalars, scalars)
def test_piscalar_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a - a == 0
    if b:
        assert (a / b) * b == a


@settings(max_examples=40, deadline=None)
@given(scalars, scalars)
def test_piscalar_numeric_homomorphism(a, b):
    with mp.workdps(40):
        lhs = eval_numeric(a * b, 30)
        rhs = eval_numeric(a, 30) * eval_numeric(b, 30)
        assert abs(lhs - rhs) <= mp.mpf(10) ** -20 * max(1, abs(rhs))


def test_eval_numeric_sigma():
    with mp.workdps(60):
        assert abs(eval_numeric(SIGMA, 50) - mp.sqrt(mp.pi)) < mp.mpf(10) ** -49
    with pytest.raises(ValueError):
        eval_numeric(SIGMA, 5)


def test_gamma_half():
    assert gamma_half(5) == 24
    assert gamma_half(Fraction(1, 2)) == SIGMA
    assert gamma_half(Fraction(5, 2)) == Fraction(3, 4) * SIGMA
    for bad in (0, -1, Fraction(1, 3)):
        with pytest.raises(ValueError):
            gamma_half(bad)


def test_rational_function_reduces():
    x = Poly([Fraction(0), 1])
    f = RationalFunction(x * x - Poly([1]), x - Poly([1]))
    assert f.is_polynomial
    assert f == RationalFunction(x + Poly([1]))
    with pytest.raises(ZeroDivisionError):
        RationalFunction(x, Poly())


def test_xi_function_evaluation_and_pole():
    xi = XiFunction.xi()
    f = (xi + 1) / (xi - 1)
    assert f(PiScalar(3)) == 2
    with pytest.raises(ZeroDivisionError):
        f(PiScalar(1))


def test_expand_at_one_simple_pole():
    xi = XiFunction.xi()
    s = expand_at_one((xi + 1) / (xi - 1), 2)  # 2/(xi-1) + 1
    assert s.min_order == -1
    assert (s[-1], s[0], s[1], s[2]) == (2, 1, 0, 0)


def test_expand_at_one_rejects_double_pole():
    xi = XiFunction.xi()
    with pytest.raises(ValueError):
        expand_at_one(1 / ((xi - 1) ** 2), 1)


def test_laurent_series_product_and_truncation():
    a = LaurentSeries(-1, (PiScalar(1), PiScalar(2), PiScalar(3)))
    b = LaurentSeries(1, (PiScalar(1), SIGMA))
    p = a * b
    assert p.min_order == 0
    assert p[0] == 1 and p[1] == SIGMA + 2
    assert a.truncate(0).order == 0
    with pytest.raises(IndexError):
        a[5]
