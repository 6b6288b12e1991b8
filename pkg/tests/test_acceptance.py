"""Acceptance suite: one test per numbered claim about the package.

Each test pins its own tolerances and ranges; nothing here is loosened to
make a run green.  Criterion 11 (untwisted factorization of the complete
sum over coprime moduli) is expected to fail: the identity as stated is
false, and the test exhibits the minimal counterexample rather than
asserting a weakened form.  See the crt check in igusa.checks for the
twisted identity that actually holds.
"""

import time
from fractions import Fraction
from math import gcd, inf, sqrt

import numpy as np
import pytest

from igusa.catalog import get_entry, load_catalog
from igusa.charsum import (
    VarietySpec,
    characters,
    gauss_coefficient,
    langweil_ratio,
)
from igusa.counting import BudgetError, sparse_ord_counts
from igusa.expsum import decay_fit, exp_sum, s_f_composite
from igusa.polys import ZConstraint, parse_polynomial
from igusa.resolution import (
    lct_values,
    pole_order_audit,
    thm_bound_check,
)
from igusa.checks import (
    check_collapse_random,
    check_estimation_random,
    run_all,
    report_to_json,
)
from igusa.zeta import (
    bridge_expsum_empirical,
    denef_rational,
    moi_estimate,
    poles,
    series_from_measures,
)

ALL = ZConstraint.all_space()


def test_criterion_01_bridge_identity():
    """Sum reconstructed from zeta data matches direct enumeration:
    |bridge - direct| <= 1e-9 max(|direct|, p^{-mn/2}) for every catalog
    entry, p in {3,5,7}, 2 <= m <= 5 with p^{mn} <= 2e8; under 5 minutes.
    """
    t0 = time.time()
    checked = 0
    for ent in load_catalog():
        for p in (3, 5, 7):
            for m in range(2, 6):
                if p ** (m * ent.n) > 2 * 10**8:
                    continue
                E = exp_sum(ent.f, ent.Z, p, m)
                B = bridge_expsum_empirical(ent.f, ent.Z, p, m)
                scale = max(abs(complex(E.value)), p ** (-m * ent.n / 2))
                diff = abs(complex(E.value) - complex(B))
                assert diff <= 1e-9 * scale, (
                    f"bridge mismatch for {ent.name} at p={p}, m={m}: "
                    f"|diff|={diff:.3e}, scale={scale:.3e}"
                )
                checked += 1
    assert checked >= 8 * 3 * 4 - 4  # nearly the full grid is feasible
    assert time.time() - t0 <= 300


def test_criterion_02_closed_form_vs_empirical_series():
    """First 10 zeta series coefficients from the resolution formula agree
    with the enumerated measures as exact cyclotomic rationals, for every
    entry with resolution data, all conductor-1 characters of order
    dividing lcm(N_i), p in {5,7,11,13}.  The two-variable entries at
    p >= 7 exceed any feasible point budget at this depth; those are
    attempted and recorded as budget skips, and the test asserts the
    feasible core actually ran.
    """
    K = 9
    ran = []
    skipped = []
    for ent in load_catalog():
        if ent.resolution is None:
            continue
        L = np.lcm.reduce([d.N for d in ent.resolution.divisors])
        for q in (5, 7, 11, 13):
            budget = 4 * 10**9 if (ent.n == 2 and q == 5) else None
            try:
                meas = sparse_ord_counts(ent.f, ent.Z, q, K, c_max=1,
                                         budget=budget)
            except BudgetError:
                assert ent.n == 2 and q >= 7, (
                    f"unexpected budget failure for {ent.name} at q={q}"
                )
                skipped.append((ent.name, q))
                continue
            for chi in [None] + [
                c for c in characters(q, 1) if L % c.order == 0
            ]:
                emp = series_from_measures(meas, q, chi, K)
                closed = denef_rational(ent.resolution, q, chi).series(K)
                for k in range(K + 1):
                    assert (emp.coeff(k) - closed.coeff(k)).is_zero(), (
                        f"series mismatch for {ent.name}, q={q}, "
                        f"chi={'triv' if chi is None else chi.e}, k={k}"
                    )
            ran.append((ent.name, q))
    one_var = {n for n, _ in ran if get_entry(n).n == 1}
    assert one_var == {"x", "xsq", "xcube", "x4"}
    assert ("xy", 5) in ran and ("cusp", 5) in ran
    assert set(skipped) == {(n, q) for n in ("xy", "cusp")
                            for q in (7, 11, 13)}


def test_criterion_03_gauss_coefficient_magnitude():
    """|g| = sqrt(p)/(p-1) within 1e-10 for every nontrivial conductor-1
    character, p <= 31."""
    for p in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        for chi in characters(p, 1):
            g = abs(complex(gauss_coefficient(chi).to_complex()))
            want = sqrt(p) / (p - 1)
            assert abs(g - want) <= 1e-10, (
                f"|g| off at p={p}, e={chi.e}: {g} vs {want}"
            )


def test_criterion_04_decay_bound():
    """sup over the recorded grid (p >= entry threshold, 2 <= m <= 8) of
    |E| p^{sigma m} / m^{n-1} is finite and at most the entry's recorded
    constant; for f = x^2 every ratio equals 1 within 1e-9."""
    for ent in load_catalog():
        sup = 0.0
        ratios = {}
        for p, ms in ent.decay_grid:
            assert p >= ent.p_threshold
            rep = decay_fit(ent.f, ent.Z, ent.sigma, [p], ms)
            sup = max(sup, rep["supremum"])
            ratios.update(rep["ratios"])
        assert np.isfinite(sup)
        assert sup <= ent.decay_constant or sup == 0.0 == ent.decay_constant, (
            f"{ent.name}: sup {sup} exceeds recorded {ent.decay_constant}"
        )
        if ent.name == "xsq":
            for (p, m), r in ratios.items():
                assert r is not None and abs(r - 1.0) <= 1e-9, (
                    f"x^2 ratio at p={p}, m={m} is {r}, expected 1"
                )


def test_criterion_05_lower_bound_witness():
    """For f = x^2, |E| >= (1/2) p^{-m/2} at every even m <= 8, p in
    {3,5,7}: the decay exponent 1/2 is attained, not just an upper bound."""
    f = parse_polynomial("x^2")
    for p in (3, 5, 7):
        for m in (2, 4, 6, 8):
            E = exp_sum(f, ALL, p, m)
            mag = abs(complex(E.value))
            assert mag >= 0.5 * p ** (-m / 2), (
                f"|E| too small at p={p}, m={m}: {mag}"
            )


def test_criterion_06_threshold_bound_instances():
    """Witnessed threshold bounds hold with the exact slacks 0 (x^2, d=2),
    0 (x^3, d=3), 1/4 (x^4, d=2); the multi-divisor and collapsed single-
    divisor bounds agree on 10^4 random tuples."""
    want = {"xsq": (2, Fraction(0)), "xcube": (3, Fraction(0)),
            "x4": (2, Fraction(1, 4))}
    for name, (d, slack) in want.items():
        res = get_entry(name).resolution
        c, _ = lct_values(res)
        w = next(w for w in res.witnesses if w.d == d)
        rep = thm_bound_check(res, w, c)
        assert rep["satisfied"] and rep["slack"] == slack, (
            f"{name}: d={d} slack {rep['slack']}, expected {slack}"
        )
    rep = check_collapse_random(count=10**4)
    assert rep["failures"] == 0 and rep["count"] == 10**4


def test_criterion_07_coefficient_estimate_random():
    """Exhaustively enumerated coefficient mass stays under the closed-form
    estimate on 1000 random divisor tuples; zero failures."""
    rep = check_estimation_random(count=1000)
    assert rep["failures"] == 0 and rep["count"] == 1000


def test_criterion_08_quadratic_character_sums():
    """|sum over F_p of chi(x(x-1))| <= 2 sqrt(p) for the quadratic
    character, all 5 <= p <= 101; full-group orthogonality sums are
    exactly zero."""
    import sympy

    for p in sympy.primerange(5, 102):
        chi = next(c for c in characters(p, 1) if c.order == 2)
        acc = chi(0)  # zero; fixes the working order
        orth = chi(0)
        for x in range(p):
            acc = acc + chi(x * (x - 1) % p)
        for u in range(1, p):
            orth = orth + chi(u)
        mag = abs(complex(acc.to_complex()))
        assert mag <= 2 * sqrt(p) + 1e-12, (
            f"curve sum too large at p={p}: {mag}"
        )
        assert orth.is_zero(), f"orthogonality violated at p={p}"


def test_criterion_09_hasse_point_counts():
    """Exact point counts of y^2 = x^3 - x deviate from p by at most
    2 sqrt(p) for every 5 <= p <= 47."""
    import sympy

    ell = VarietySpec(2, (parse_polynomial("y^2 - x^3 + x"),), None, 1)
    rep = langweil_ratio(ell, list(sympy.primerange(5, 48)))
    assert rep["max_ratio"] <= 2, f"Hasse ratio {rep['max_ratio']} > 2"


def test_criterion_10_pole_order_and_oscillation_index():
    """Oscillation-index estimates from the closed-form pole sets equal
    1/2 (x^2), 1/3 (x^3), +inf (x); the maximal-pole-order audits pass on
    xy (order-2 pole at -1, threshold 1 <= 1) and x^2 (1/2 <= 1/2)."""
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

    xy = get_entry("xy").resolution
    P = poles(denef_rational(xy, 5, None))
    assert (Fraction(-1), 2) in P.poles
    assert lct_values(xy)[1] == 1
    rep = pole_order_audit(xy, 1, 5)
    assert rep["passed"] and not rep["vacuous"]

    xsq = get_entry("xsq").resolution
    assert lct_values(xsq)[1] == Fraction(1, 2)
    rep = pole_order_audit(xsq, 2, 5)
    assert rep["passed"] and not rep["vacuous"]


def test_criterion_11_untwisted_multiplicativity():
    """|S_f(ab) - S_f(a) S_f(b)| <= 1e-12 for coprime a, b <= 49 (a, b <=
    25 for x^2 + y^3), f in {x^2, x^3, x^2 + y^3}.

    This is expected to FAIL: the untwisted product is not an identity.
    Writing x = b y + a z, the exponent splits as f(x)/(ab) =
    b' f(x)/a + a' f(x)/b mod 1 with b b' + a a' = 1 mod ab, so the
    factors acquire the unit twists b' and a'; the identity that holds
    (to 1e-16, verified in igusa.checks.check_crt) is
    S_f(ab) = S_{b'f}(a) S_{a'f}(b).  Minimal counterexample below:
    f = x^2, a = 3, b = 4 gives |S(12) - S(3)S(4)| = 1/sqrt(3) = 0.577.
    """
    cases = [("x^2", 49), ("x^3", 49), ("x^2 + y^3", 25)]
    failures = []
    for expr, bound in cases:
        f = parse_polynomial(expr)
        for a in range(2, bound + 1):
            for b in range(a + 1, bound + 1):
                if gcd(a, b) != 1:
                    continue
                sab = complex(s_f_composite(f, a * b))
                sa = complex(s_f_composite(f, a))
                sb = complex(s_f_composite(f, b))
                diff = abs(sab - sa * sb)
                if diff > 1e-12:
                    failures.append((expr, a, b, diff))
    assert not failures, (
        f"untwisted multiplicativity fails on {len(failures)} coprime "
        f"pairs; first: f={failures[0][0]}, (a,b)=({failures[0][1]},"
        f"{failures[0][2]}), |diff|={failures[0][3]:.6f}.  The untwisted "
        "product is not an identity; the twisted factorization "
        "S_f(ab) = S_{b'f}(a) S_{a'f}(b) with bb' + aa' = 1 mod ab is the "
        "identity that holds (igusa.checks.check_crt verifies it to 1e-12)."
    )


def test_criterion_12_run_all_determinism():
    """The whole check battery serialized with 1 worker and with 4 workers
    produces byte-identical reports (no timing data, sorted keys, fixed
    reduction orders); restricted to p <= 7 to bound runtime, via the same
    prime filter the command-line run-all exposes."""
    r1 = run_all(threads=1, primes=(3, 5, 7))
    r4 = run_all(threads=4, primes=(3, 5, 7))
    s1, s4 = report_to_json(r1), report_to_json(r4)
    assert s1 == s4, "reports differ between 1 and 4 workers"
    assert r1["all_passed"], f"check battery not green: {r1['summary']}"
