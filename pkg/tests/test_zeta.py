"""Zeta series two ways, the sum-from-zeta reconstruction, and poles."""

from dataclasses import replace
from fractions import Fraction
from math import inf

import pytest

from igusa.catalog import get_entry
from igusa.charsum import characters, trivial_character
from igusa.counting import sparse_ord_counts
from igusa.cyclo import Cyclo
from igusa.expsum import exp_sum
from igusa.polys import ZConstraint, parse_polynomial
from igusa.zeta import (
    bridge_expsum_empirical,
    denef_rational,
    moi_estimate,
    poles,
    series_from_measures,
    shifted_trivial_coefficient,
    zeta_series_empirical,
)

ALL = ZConstraint.all_space()


def test_empirical_trivial_series_for_square():
    # measure of {ord x^2 = 2k} is (1 - 1/p) p^{-(k+1)} ... exactly
    s = zeta_series_empirical(parse_polynomial("x^2"), ALL, 5, None, 6)
    want = [Fraction(4, 5), 0, Fraction(4, 25), 0, Fraction(4, 125), 0,
            Fraction(4, 625)]
    assert list(s.rational_coeffs()) == want


def test_empirical_series_quadratic_character():
    # unit part of x^2 on {ord = 0} is a square: chi_2 sums to
    # (#QR - #QNR-weighted) ... all units are squares, so same as trivial
    chi = next(c for c in characters(5, 1) if c.order == 2)
    s = zeta_series_empirical(parse_polynomial("x^2"), ALL, 5, chi, 4)
    assert s.coeff(0) == Cyclo.from_rational(Fraction(4, 5))
    assert s.coeff(1).is_zero()
    assert s.coeff(2) == Cyclo.from_rational(Fraction(4, 25))


def test_denef_matches_empirical_for_catalog_entries():
    for name, q, K in [("xsq", 5, 6), ("xcube", 7, 6), ("xy", 5, 6)]:
        ent = get_entry(name)
        meas = sparse_ord_counts(ent.f, ent.Z, q, K, c_max=1)
        for chi in [None] + [
            c for c in characters(q, 1)
            if all(d.N % c.order == 0 for d in ent.resolution.divisors)
        ]:
            emp = series_from_measures(meas, q, chi, K)
            closed = denef_rational(ent.resolution, q, chi).series(K)
            for k in range(K + 1):
                assert (emp.coeff(k) - closed.coeff(k)).is_zero()


def test_corrupted_discrepancy_is_detected():
    # perturbing the divisor discrepancy of the x^2 data must surface as a
    # series mismatch at coefficient index 2
    ent = get_entry("xsq")
    res = ent.resolution
    bad_div = replace(next(iter(res.divisors)), nu=2)
    bad = replace(res, divisors=(bad_div,))
    q = 5
    emp = zeta_series_empirical(ent.f, ent.Z, q, None, 4)
    closed = denef_rational(bad, q, None).series(4)
    assert (emp.coeff(0) - closed.coeff(0)).is_zero()
    assert not (emp.coeff(2) - closed.coeff(2)).is_zero()


def test_shifted_trivial_coefficient_geometric_series():
    # Z = (1 - 1/q)/(1 - t/q): shifted coefficient reproduces the exact
    # partial sums used by the reconstruction
    q = 5
    z = zeta_series_empirical(parse_polynomial("x"), ALL, q, None, 4)
    zs = list(z.rational_coeffs())
    # E(m) = 0 for f = x and m >= 1, and Z(0) = measure(ord >= 0) = 1,
    # so the shifted coefficient must equal -1 at every level k >= 1
    for k in (1, 2, 3):
        assert shifted_trivial_coefficient(zs, k, q) == -1


def test_bridge_matches_direct_sum():
    for expr, p, m in [("x^2", 3, 3), ("x^3 - 3*x", 5, 2),
                       ("x^2 + y^3", 5, 2), ("x*y", 3, 3)]:
        f = parse_polynomial(expr)
        E = exp_sum(f, ALL, p, m)
        B = bridge_expsum_empirical(f, ALL, p, m)
        scale = max(abs(complex(E.value)), p ** (-m * f.nvars / 2))
        assert abs(complex(E.value) - complex(B)) <= 1e-9 * scale


def test_poles_square_and_product():
    xsq = get_entry("xsq").resolution
    P = poles(denef_rational(xsq, 5, None))
    assert P.poles == ((Fraction(-1, 2), 1),)

    xy = get_entry("xy").resolution
    P = poles(denef_rational(xy, 5, None))
    assert (Fraction(-1), 2) in P.poles


def test_poles_smooth_is_empty_after_strip():
    res = get_entry("x").resolution
    P = poles(denef_rational(res, 5, None))
    assert P.poles == ()


def test_moi_estimates():
    def evidence(name):
        ent = get_entry(name)
        out = []
        for p in (5, 7):
            for chi in [None] + [
                c for c in characters(p, 1)
                if all(d.N % c.order == 0
                       for d in ent.resolution.divisors)
            ]:
                out.append({
                    "p": p,
                    "chi_label": "t" if chi is None else str(chi.e),
                    "poleset": poles(denef_rational(ent.resolution, p, chi)),
                })
        return out

    assert moi_estimate(evidence("xsq"))["moi"] == Fraction(1, 2)
    assert moi_estimate(evidence("xcube"))["moi"] == Fraction(1, 3)
    assert moi_estimate(evidence("x"))["moi"] == inf


def test_constant_term_is_domain_measure_complement():
    # Z(0) = total measure of {ord f >= 0} = 1 for the full domain
    R = denef_rational(get_entry("xsq").resolution, 5, None)
    s = R.series(0)
    assert s.coeff(0) == Cyclo.from_rational(Fraction(4, 5))
