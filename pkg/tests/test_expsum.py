"""Exponential sums: fold vs direct oracle, exact zeros, splitting, decay."""

from fractions import Fraction
from math import gcd

import pytest

from igusa.expsum import (
    IdentityViolationError,
    critical_split,
    decay_fit,
    exp_sum,
    exp_sum_direct,
    s_f_composite,
)
from igusa.polys import ZConstraint, parse_polynomial

ALL = ZConstraint.all_space()


@pytest.mark.parametrize("expr,p,m", [
    ("x^2", 3, 2),
    ("x^2", 5, 3),
    ("x^3", 7, 2),
    ("x^3 - 3*x", 5, 3),
    ("x*y", 3, 3),
    ("x^2 + y^3", 5, 2),
])
def test_fold_matches_direct_oracle(expr, p, m):
    f = parse_polynomial(expr)
    E = exp_sum(f, ALL, p, m)
    D = exp_sum_direct(f, ALL, p, m)
    assert abs(complex(E.value) - complex(D)) < 1e-12


def test_gauss_magnitude_for_squares():
    # |E| = p^{-m/2} for f = x^2 at every even and odd level
    for p in (3, 5, 7):
        for m in (2, 3, 4):
            E = exp_sum(parse_polynomial("x^2"), ALL, p, m)
            assert abs(E.magnitude() - p ** (-m / 2)) < 1e-12


def test_linear_polynomial_is_exact_zero():
    for m in (1, 2, 3):
        E = exp_sum(parse_polynomial("x"), ALL, 5, m)
        assert E.exact_zero and E.magnitude() == 0.0


def test_exact_zero_is_structural_not_numeric():
    # x*y at m = 2: the histogram passes the coset-symmetry test
    E = exp_sum(parse_polynomial("x + 7*y"), ALL, 3, 2)
    assert E.exact_zero


def test_constrained_sum():
    # restrict to x = 0 mod p: f = x^2 sums over the p^(m-1) multiples of p
    f = parse_polynomial("x^2")
    Z = ZConstraint.of(parse_polynomial("x"))
    E = exp_sum(f, Z, 3, 2)
    # x = 3t mod 9 -> x^2 = 0 mod 9: sum = 3/9 exactly
    assert abs(complex(E.value) - (3 / 9)) < 1e-15


def test_composite_twisted_factorization():
    # exact coprime factorization: S_f(ab) = S_{b'f}(a) * S_{a'f}(b) with
    # b b' + a a' = 1 mod ab; the untwisted product is wrong in general
    f = parse_polynomial("x^3")
    for a, b in [(4, 9), (8, 27), (25, 49), (7, 9)]:
        assert gcd(a, b) == 1
        bb, aa = pow(b, -1, a), pow(a, -1, b)
        lhs = complex(s_f_composite(f, a * b))
        rhs = complex(s_f_composite(f * bb, a)) * complex(
            s_f_composite(f * aa, b)
        )
        assert abs(lhs - rhs) < 1e-13


def test_composite_untwisted_product_is_not_the_identity():
    f = parse_polynomial("x^2")
    lhs = complex(s_f_composite(f, 12))
    rhs = complex(s_f_composite(f, 3)) * complex(s_f_composite(f, 4))
    assert abs(lhs - rhs) > 0.5  # 1/sqrt(3), a sign flip from the twist


def test_critical_split_passes_with_correct_values():
    f = parse_polynomial("x^3 - 3*x")
    # critical points x = 1, -1 with values -2, 2
    rep = critical_split(f, [5 - 2, 2], ALL, 5, 2)
    assert rep["ok"]
    assert rep["residual"] < 1e-12


def test_critical_split_fails_with_wrong_values():
    f = parse_polynomial("x^3 - 3*x")
    with pytest.raises(IdentityViolationError):
        critical_split(f, [1], ALL, 5, 2)


def test_decay_fit_square_is_exact():
    rep = decay_fit(parse_polynomial("x^2"), ALL, Fraction(1, 2),
                    [3, 5], range(2, 6))
    for r in rep["ratios"].values():
        assert abs(r - 1.0) < 1e-9
    assert abs(rep["slope"] - 0.5) < 1e-6
    assert rep["supremum"] <= 1.0 + 1e-9
