"""Exponential sums over residue rings: normalized complete sums, the
constrained p-power sums, critical-value splitting and decay-exponent fits.

All sums are folded from exact integer value histograms.  A sum that
vanishes identically is detected at the histogram level (coset symmetry)
and reported as an exact zero, never as rounding noise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cyclo import CLD, LD, PI_LD, frac_to_ld
from .counting import check_budget, value_histogram_counts
from .polys import IntPolynomial, ZConstraint, residue_grid


class IdentityViolationError(Exception):
    """A mathematically forced identity failed numerically — wrong input
    data (e.g. an incomplete critical-value list) or too small a prime."""

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


def _fold_prime_power(h: np.ndarray, p: int, m: int):
    """Fold a value histogram over Z/p^m against v -> e^{2 pi i v / p^m}.

    Returns (value, exact_zero).  The sum vanishes exactly iff the
    histogram is constant along cosets of the order-p subgroup, i.e. the
    (p, p^{m-1}) reshape has all rows equal.
    """
    q = p**m
    rows = h.reshape(p, q // p)
    if (rows == rows[0]).all():
        return CLD(0), True
    v = np.nonzero(h)[0]
    step = LD(2) * PI_LD / LD(q)
    # fixed chunking and index order keep the reduction deterministic
    # while bounding long-double temporaries
    re = LD(0)
    im = LD(0)
    for start in range(0, v.shape[0], 1 << 22):
        vv = v[start : start + (1 << 22)]
        ang = np.asarray(vv, dtype=np.longdouble) * step
        weights = h[vv].astype(np.longdouble)
        re += np.sum(weights * np.cos(ang), dtype=np.longdouble)
        im += np.sum(weights * np.sin(ang), dtype=np.longdouble)
    return CLD(re + 1j * im), False


@dataclass(frozen=True)
class ExpSumValue:
    value: complex  # clongdouble
    exact_zero: bool

    def magnitude(self) -> float:
        return 0.0 if self.exact_zero else float(abs(self.value))


def exp_sum(
    f: IntPolynomial, Z: ZConstraint, p: int, m: int, budget=None
) -> ExpSumValue:
    """p^{-mn} sum of e^{2 pi i f(x)/p^m} over x mod p^m with x-bar in Z."""
    n = f.nvars
    h, _ = value_histogram_counts(f, Z, p, m, budget=budget)
    val, zero = _fold_prime_power(h, p, m)
    scale = frac_to_ld(Fraction(1, p ** (m * n)))
    return ExpSumValue(CLD(val * scale), zero)


def exp_sum_direct(f: IntPolynomial, Z: ZConstraint, p: int, m: int):
    """Definitional oracle: same sum evaluated point by point in double
    precision, bypassing the histogram machinery."""
    n = f.nvars
    q = p**m
    X = residue_grid(q, n)
    if not Z.is_full():
        X = X[Z.mask_mod_p(X % p, p)]
    vals = f.eval_mod(X, q)
    return np.exp(2j * np.pi * vals / q).sum() / q**n


def s_f_composite(f: IntPolynomial, a: int, budget=None):
    """Normalized complete sum a^{-n} sum_{x mod a} e^{2 pi i f(x)/a}."""
    if a < 2:
        raise ValueError("modulus must be >= 2")
    n = f.nvars
    check_budget(a**n, f"{a}^{n}", budget)
    X = residue_grid(a, n)
    vals = f.eval_mod(X, a)
    h = np.bincount(vals, minlength=a)
    ang = np.arange(a, dtype=np.longdouble) * (LD(2) * PI_LD / LD(a))
    w = h.astype(np.longdouble)
    re = np.sum(w * np.cos(ang), dtype=np.longdouble)
    im = np.sum(w * np.sin(ang), dtype=np.longdouble)
    return CLD(re + 1j * im) / CLD(LD(a) ** LD(n))


def critical_split(
    f: IntPolynomial,
    crit_values,
    Z: ZConstraint,
    p: int,
    m: int,
    budget=None,
    rel_tol: float = 1e-9,
) -> dict:
    """Split the level-m sum over the strata f = z_i mod p for the listed
    critical values; for m >= 2 the remaining strata contribute nothing,
    so the summands must reproduce the full sum."""
    if m < 2:
        raise ValueError("splitting needs level m >= 2")
    n = f.nvars
    total = exp_sum(f, Z, p, m, budget=budget)
    summands = []
    acc = CLD(0)
    for z in crit_values:
        Zi = ZConstraint(Z.polys + (f - int(z),))
        Ei = exp_sum(f, Zi, p, m, budget=budget)
        summands.append({"z": int(z), "value": Ei})
        acc = acc + Ei.value
    scale = max(abs(total.value), LD(p) ** (LD(-m * n) / LD(2)))
    err = abs(total.value - acc)
    report = {
        "p": p,
        "m": m,
        "total": total,
        "summands": summands,
        "residual": float(err),
        "ok": bool(err <= rel_tol * scale),
    }
    if not report["ok"]:
        raise IdentityViolationError(
            f"critical-value split failed at p={p}, m={m}: "
            f"residual {float(err):.3e} (wrong critical values or p too small)",
            report,
        )
    return report


def decay_fit(
    f: IntPolynomial,
    Z: ZConstraint,
    sigma: Fraction,
    primes,
    m_range,
    budget=None,
) -> dict:
    """Ratio table |E| p^{sigma m} / m^{n-1} over the grid, its supremum,
    and a pooled least-squares slope of -log_p|E| against m."""
    n = f.nvars
    ratios = {}
    pts = []
    sup = 0.0
    for p in primes:
        for m in m_range:
            E = exp_sum(f, Z, p, m, budget=budget)
            if E.exact_zero:
                ratios[(p, m)] = None  # exact zero, no ratio
                continue
            mag = abs(E.value)
            r = mag * LD(p) ** frac_to_ld(sigma * m) / LD(m) ** LD(n - 1)
            ratios[(p, m)] = float(r)
            sup = max(sup, float(r))
            pts.append((m, float(-np.log(mag) / np.log(LD(p)))))
    slope = None
    if len(pts) >= 2:
        xs = np.array([t[0] for t in pts], dtype=float)
        ys = np.array([t[1] for t in pts], dtype=float)
        slope = float(np.polyfit(xs, ys, 1)[0])
    return {
        "sigma": sigma,
        "ratios": ratios,
        "supremum": sup,
        "slope": slope,
        "n_zero": sum(1 for v in ratios.values() if v is None),
    }
