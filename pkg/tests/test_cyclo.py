"""Exact cyclotomic arithmetic and long-double conversions."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from igusa.cyclo import (
    Cyclo,
    cyclotomic_coeffs,
    frac_to_ld,
    int_to_ld,
    root_of_unity,
)


def test_cyclotomic_polynomials_small():
    assert cyclotomic_coeffs(1) == (-1, 1)
    assert cyclotomic_coeffs(2) == (1, 1)
    assert cyclotomic_coeffs(3) == (1, 1, 1)
    assert cyclotomic_coeffs(4) == (1, 0, 1)
    assert cyclotomic_coeffs(6) == (1, -1, 1)
    assert cyclotomic_coeffs(8) == (1, 0, 0, 0, 1)
    assert cyclotomic_coeffs(12) == (1, 0, -1, 0, 1)


def test_cyclotomic_polynomial_105_has_coefficient_minus_two():
    # the first index whose coefficients leave {-1, 0, 1}
    assert cyclotomic_coeffs(105)[7] == -2


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_sum_of_all_pth_roots_is_minus_one(p):
    acc = Cyclo.zero(p)
    for j in range(1, p):
        acc = acc + Cyclo.root(p, j)
    assert acc == Cyclo.from_rational(-1)
    assert acc.is_rational() and acc.rational_value() == -1


def test_cross_order_equality():
    assert Cyclo.root(2, 1) == Cyclo.from_rational(-1)
    assert Cyclo.root(4, 2) == Cyclo.from_rational(-1)
    assert Cyclo.root(3, 1) == Cyclo.root(6, 2)
    assert Cyclo.root(6, 3) == Cyclo.root(2, 1)
    assert hash(Cyclo.root(3, 1)) == hash(Cyclo.root(6, 2))


def test_root_multiplication_adds_exponents():
    z = Cyclo.root(12, 1)
    acc = Cyclo.one(12)
    for j in range(12):
        assert acc == Cyclo.root(12, j % 12)
        acc = acc * z
    assert acc == Cyclo.one()


def test_exact_zero_detection():
    # 1 + zeta_3 + zeta_3^2 = 0 inside a larger computation
    z = Cyclo.root(3, 1)
    expr = (Cyclo.one(3) + z + z * z) * Fraction(7, 3)
    assert expr.is_zero()
    assert not (z - Cyclo.one(3)).is_zero()


def test_to_complex_matches_float_root():
    for d in (3, 5, 8, 12):
        got = complex(Cyclo.root(d, 1).to_complex())
        want = complex(root_of_unity(d, 1))
        assert abs(got - want) < 1e-17
        assert abs(got - np.exp(2j * np.pi / d)) < 1e-15


small_cyclos = st.builds(
    lambda cs: Cyclo(12, tuple(Fraction(a, b) for a, b in cs)),
    st.lists(
        st.tuples(st.integers(-5, 5), st.integers(1, 5)),
        min_size=12, max_size=12,
    ),
)


@given(small_cyclos, small_cyclos, small_cyclos)
def test_ring_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert a + (b + c) == (a + b) + c
    assert (a - a).is_zero()


@given(small_cyclos, small_cyclos)
def test_to_complex_is_additive_and_multiplicative(a, b):
    za, zb = a.to_complex(), b.to_complex()
    assert abs(complex((a + b).to_complex()) - complex(za + zb)) < 1e-12
    assert abs(complex((a * b).to_complex()) - complex(za * zb)) < 1e-10


def test_int_to_ld_exact_in_mantissa():
    assert float(int_to_ld(1 << 62) - np.longdouble(2.0) ** 62) == 0.0


def test_frac_to_ld_precision_beyond_double():
    got = frac_to_ld(Fraction(1, 3))
    assert float(abs(got - np.longdouble(1) / np.longdouble(3))) == 0.0
    # double rounding would lose the low bits below 2^-52
    assert float(abs(got - np.longdouble(1.0 / 3.0))) > 0.0


def test_scalar_fast_paths():
    z = Cyclo.root(5, 2)
    assert z * 3 == z + z + z
    assert z * Fraction(1, 2) + z * Fraction(1, 2) == z
    assert 1 - z == Cyclo.one(5) - z
