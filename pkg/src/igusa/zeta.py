"""Local zeta functions of a polynomial two independent ways, the
exponential-sum bridge, pole extraction and oscillation-index estimation.

The empirical side expands the defining integral as a power series in
t = q^{-s} with exact cyclotomic-rational coefficients obtained from
residue enumeration.  The closed-form side assembles the rational function
from resolution numerical data.  The bridge reconstructs the level-m
exponential sum from the zeta data and is cross-checked against direct
enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, inf

import numpy as np
import sympy

from .charsum import MultChar, gauss_coefficient, primitive_root, trivial_character
from .counting import count_tensor, sparse_ord_counts
from .cyclo import CLD, Cyclo, frac_to_ld
from .polys import IntPolynomial, ZConstraint
from .resolution import ResolutionData, lct_values


@dataclass(frozen=True)
class SeriesPrefix:
    """Exact truncation c_0..c_K of a power series in t = q^{-s}."""

    q: int
    coeffs: tuple  # tuple of Cyclo
    K: int

    def __post_init__(self):
        if len(self.coeffs) != self.K + 1:
            raise ValueError("coefficient vector length must be K + 1")

    def coeff(self, k: int) -> Cyclo:
        return self.coeffs[k]

    def rational_coeffs(self):
        return tuple(c.rational_value() for c in self.coeffs)


@dataclass(frozen=True)
class RationalZeta:
    """Rational function sum_I c_I prod_{i in I} t^{N_i} q^{-nu_i} /
    (1 - t^{N_i} q^{-nu_i}); the constant term is the empty-factor term."""

    q: int
    chi: MultChar | None  # None = trivial character
    terms: tuple  # tuple of (Cyclo, tuple of (N, nu))

    def constant_term(self) -> Cyclo:
        acc = Cyclo.zero()
        for c, factors in self.terms:
            if not factors:
                acc = acc + c
        return acc

    def series(self, K: int) -> "SeriesPrefix":
        return series_coefficients(self, K)

    def value_at_one(self) -> Cyclo:
        """Exact evaluation at t = 1 (no factor may degenerate there)."""
        acc = Cyclo.zero()
        for c, factors in self.terms:
            scale = Fraction(1)
            for N, nu in factors:
                ratio = Fraction(1, self.q**nu)
                scale *= ratio / (1 - ratio)
            acc = acc + c * scale
        return acc


def _term_prefix(factors, q: int, K: int):
    """Fraction coefficients c_0..c_K of prod t^N q^-nu / (1 - t^N q^-nu)."""
    out = [Fraction(0)] * (K + 1)
    out[0] = Fraction(1)
    for N, nu in factors:
        single = [Fraction(0)] * (K + 1)
        a = 0
        while N * (a + 1) <= K:
            single[N * (a + 1)] = Fraction(1, q ** (nu * (a + 1)))
            a += 1
        new = [Fraction(0)] * (K + 1)
        for i, x in enumerate(out):
            if x:
                for j in range(K + 1 - i):
                    if single[j]:
                        new[i + j] += x * single[j]
        out = new
    return out


def series_coefficients(R: RationalZeta, K: int) -> SeriesPrefix:
    """Exact Taylor coefficients at t = 0 up to order K."""
    if K < 0:
        raise ValueError("truncation order must be >= 0")
    coeffs = [Cyclo.zero() for _ in range(K + 1)]
    for c, factors in R.terms:
        pref = _term_prefix(factors, R.q, K)
        for k, x in enumerate(pref):
            if x:
                coeffs[k] = coeffs[k] + c * x
    return SeriesPrefix(R.q, tuple(coeffs), K)


def shifted_trivial_coefficient(z, k: int, q: int) -> Fraction:
    """Coefficient of t^k in (t - q) Z(t) / ((q - 1)(1 - t)) given the
    coefficients z_0..z_k of Z: expand (t-q)/(1-t) = -q + (1-q)(t+t^2+...)
    and convolve."""
    head = sum(z[:k]) if k else 0
    return (-q * z[k] + (1 - q) * head) / (q - 1)


# ---------------------------------------------------------------------
# empirical series


def series_from_measures(meas, q: int, chi: MultChar | None, K: int) -> SeriesPrefix:
    """Assemble series coefficients from precomputed class measures, so a
    single enumeration can serve many characters."""
    coeffs = []
    for k in range(K + 1):
        if chi is None or chi.is_trivial():
            coeffs.append(Cyclo.from_rational(sum(meas[k].values(), Fraction(0))))
        else:
            acc = Cyclo.zero(chi.order)
            for u in sorted(meas[k]):
                acc = acc + chi(u) * meas[k][u]
            coeffs.append(acc)
    return SeriesPrefix(q, tuple(coeffs), K)


def zeta_series_empirical(
    f: IntPolynomial,
    Z: ZConstraint,
    p: int,
    chi: MultChar | None,
    K: int,
    budget=None,
) -> SeriesPrefix:
    """Series coefficients c_k = measure-weighted character sum over the
    locus {ord f = k} inside the constrained domain, exact."""
    c = 1 if chi is None or chi.is_trivial() else chi.conductor
    meas = sparse_ord_counts(f, Z, p, K, c_max=c, budget=budget)
    return series_from_measures(meas, p, chi, K)


# ---------------------------------------------------------------------
# closed form from resolution data


def denef_rational(
    res: ResolutionData, q: int, chi: MultChar | None
) -> RationalZeta:
    """Assemble the rational zeta function from resolution numerical data:
    one term per stratum I, with coefficient

        c_I = (q-1)^{#I} q^{-n} sum over stratum points of chi(unit).

    The term is forced to zero when the character order fails to divide
    some N_i (i in I), and — when f vanishes on the relevant locus — for
    any character of conductor > 1."""
    trivial = chi is None or chi.is_trivial()
    d = 1 if trivial else chi.order
    cond = 1 if trivial else chi.conductor
    n = res.n
    terms = []
    for s in res.strata:
        if not s.nonempty:
            continue
        if res.vanish_on_Z and not trivial and cond > 1:
            continue
        divs = [res.divisor(i) for i in sorted(s.ids)]
        if any(dv.N % d != 0 for dv in divs):
            continue
        tab = s.table(q)
        if trivial:
            csum = Cyclo.from_rational(sum(tab.values()))
        else:
            csum = Cyclo.zero(d)
            for u in sorted(tab):
                csum = csum + chi(u) * tab[u]
        if csum.is_zero():
            continue
        scale = Fraction((q - 1) ** len(divs), q**n)
        terms.append((csum * scale, tuple((dv.N, dv.nu) for dv in divs)))
    return RationalZeta(q, None if trivial else chi, tuple(terms))


# ---------------------------------------------------------------------
# the bridge: exponential sums from zeta data


def _coeff_of(entry, k: int, q: int) -> Cyclo:
    if isinstance(entry, RationalZeta):
        return series_coefficients(entry, k).coeff(k)
    if isinstance(entry, SeriesPrefix):
        if entry.K < k:
            raise ValueError(f"series prefix too short: need index {k}")
        return entry.coeff(k)
    raise TypeError("expected RationalZeta or SeriesPrefix")


def bridge_expsum(
    trivial_zeta,
    twisted,
    q: int,
    m: int,
    domain_measure: Fraction,
):
    """Reconstruct the level-m exponential sum from zeta data:

        E = Z(0) + Coeff_{t^{m-1}} [(t - q) Z_triv / ((q-1)(1-t))]
              + sum over nontrivial chi of g_{chi^{-1}} Coeff_{t^{m-c(chi)}} Z_chi

    Z(0) is the exact measure of the integration domain.  ``twisted`` is a
    list of (chi, zeta) pairs covering all nontrivial characters of
    conductor <= m whose twisted zeta function is nonzero."""
    if m < 2:
        raise ValueError("bridge needs level m >= 2")
    z = [
        _coeff_of(trivial_zeta, k, q).rational_value() for k in range(m)
    ]
    total = CLD(frac_to_ld(domain_measure + shifted_trivial_coefficient(z, m - 1, q)))
    for chi, zc in twisted:
        c = chi.conductor
        if c > m:
            continue
        coeff = _coeff_of(zc, m - c, q)
        if coeff.is_zero():
            continue
        g = gauss_coefficient(chi.inverse())
        total = total + (g * coeff).to_complex()
    return total


def bridge_expsum_empirical(
    f: IntPolynomial, Z: ZConstraint, p: int, m: int, budget=None
):
    """Same reconstruction, fed directly from one enumeration at level m.

    The per-conductor character sums are evaluated as discrete Fourier
    transforms over the cyclic unit group, which keeps the cost near
    phi(p^m) log phi(p^m) instead of phi(p^m)^2."""
    if m < 2:
        raise ValueError("bridge needs level m >= 2")
    n = f.nvars
    ct = count_tensor(f, Z, p, m, c_max=m, budget=budget)
    qmn = p ** (m * n)
    # trivial-character part
    mass = [Fraction(0)] * m
    for k, (_, tallies) in ct.counts.items():
        mass[k] = Fraction(int(tallies.sum()), qmn)
    total = complex(
        ct.domain_measure() + shifted_trivial_coefficient(mass, m - 1, p)
    )
    # twisted parts, one conductor at a time (conductor c pairs with the
    # series coefficient at index m - c)
    for c in range(1, m + 1):
        k = m - c
        if k not in ct.counts:
            continue
        units, tallies = ct.counts[k]
        pc = p**c
        phi = pc - pc // p
        g = primitive_root(p, c)
        # weights indexed by discrete log
        w = np.zeros(phi, dtype=np.float64)
        logmap = {}
        acc = 1
        for t in range(phi):
            logmap[acc] = t
            acc = acc * g % pc
        for u, cnt in zip(units.tolist(), tallies.tolist()):
            w[logmap[u % pc]] += cnt / qmn
        if not w.any():
            continue
        # z_e = sum_t w[g^t] e^{+2 pi i e t / phi}
        zvals = np.fft.ifft(w) * phi
        # gauss vector for chi_{-e}: scale * sum_t e(g^t/p^c) e^{-2 pi i e t/phi}
        upow = np.empty(phi, dtype=np.int64)
        acc = 1
        for t in range(phi):
            upow[t] = acc
            acc = acc * g % pc
        b = np.exp(2j * np.pi * upow / pc)
        gvals = np.fft.fft(b) / (p ** (c - 1) * (p - 1))
        e = np.arange(phi)
        valid = e != 0
        if c > 1:
            valid &= e % p != 0
        total = total + complex(np.sum(gvals[valid] * zvals[valid]))
    return total


# ---------------------------------------------------------------------
# poles


@dataclass(frozen=True)
class PoleSet:
    """Real parts (in the s-plane) and orders of the nontrivial poles,
    i.e. poles of (t - q)^delta R(t) with delta = 1 for the trivial
    character."""

    poles: tuple  # tuple of (Fraction real part, int order), sorted
    delta: int

    def largest(self):
        """Largest real part among nontrivial poles, or None if empty."""
        return max((r for r, _ in self.poles), default=None)


def _poly_mul(a, b):
    out = [Cyclo.zero() for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _poly_divmod_monic(num, den):
    """Divide Cyclo-coefficient polynomial by an integer monic polynomial;
    returns (quotient, remainder_is_zero)."""
    num = list(num)
    dn = len(den) - 1
    if len(num) < len(den):
        return None, all(c.is_zero() for c in num)
    quo = [Cyclo.zero() for _ in range(len(num) - dn)]
    for i in range(len(num) - 1, dn - 1, -1):
        q = num[i]
        quo[i - dn] = q
        if q.is_zero():
            continue
        for k in range(dn + 1):
            num[i - dn + k] = num[i - dn + k] - q * den[k]
    return quo, all(c.is_zero() for c in num[:dn])


def poles(R: RationalZeta) -> PoleSet:
    """Pole real parts -nu/N with exact orders after cancellation.

    The rational function is written over the common denominator
    prod (1 - q^{-nu} t^N)^max-mult; the numerator is expanded with exact
    cyclotomic coefficients and each irreducible factor of t^N - q^nu is
    divided out as many times as it goes.  The t = q factor is stripped
    for the trivial character."""
    q = R.q
    delta = 1 if R.chi is None or R.chi.is_trivial() else 0
    # multiplicity of each distinct (N, nu) in the common denominator
    den_mult = {}
    for _, factors in R.terms:
        local = {}
        for pair in factors:
            local[pair] = local.get(pair, 0) + 1
        for pair, k in local.items():
            den_mult[pair] = max(den_mult.get(pair, 0), k)
    if not den_mult:
        return PoleSet((), delta)
    # numerator = sum_I c_I * prod_I (t^N q^-nu) * prod of co-factors
    num = None
    for c, factors in R.terms:
        local = {}
        shift = 0
        scale = Fraction(1)
        for N, nu in factors:
            local[(N, nu)] = local.get((N, nu), 0) + 1
            shift += N
            scale *= Fraction(1, q**nu)
        part = [Cyclo.zero()] * shift + [c * scale]
        for (N, nu), mm in den_mult.items():
            extra = mm - local.get((N, nu), 0)
            base = [Cyclo.one()] + [Cyclo.zero()] * (N - 1) + [
                Cyclo.from_rational(Fraction(-1, q**nu))
            ]
            for _ in range(extra):
                part = _poly_mul(part, base)
        num = part if num is None else [
            a + b for a, b in zip(
                num + [Cyclo.zero()] * (len(part) - len(num)),
                part + [Cyclo.zero()] * (len(num) - len(part)),
            )
        ]
    t = sympy.Symbol("t")
    # group candidate ratios
    ratios = {}
    for (N, nu), mm in den_mult.items():
        ratios.setdefault(Fraction(nu, N), []).append(((N, nu), mm))
    out = []
    for ratio in sorted(ratios):
        best = 0
        seen = set()
        for (N, nu), _ in ratios[ratio]:
            for fac, _ in sympy.factor_list(t**N - q**nu, t)[1]:
                key = tuple(int(x) for x in sympy.Poly(fac, t).all_coeffs())
                if key in seen:
                    continue
                seen.add(key)
                dmult = sum(
                    mm
                    for (N2, nu2), mm in den_mult.items()
                    if sympy.rem(t**N2 - q**nu2, fac, t) == 0
                )
                # divide the numerator by this factor as often as possible
                den_ascending = [int(x) for x in reversed(sympy.Poly(fac, t).all_coeffs())]
                nmult = 0
                work = num
                while nmult < dmult:
                    quo, exact = _poly_divmod_monic(work, den_ascending)
                    if not exact or quo is None:
                        break
                    work = quo
                    nmult += 1
                order = dmult - nmult
                # for trivial chi the t = q factor is stripped when deciding
                # whether this is a nontrivial pole; the reported order is
                # the order as a pole of the zeta function itself
                strip = 1 if (delta and key == (1, -q)) else 0
                if order - strip > 0:
                    best = max(best, order)
        if best > 0:
            out.append((-ratio, best))
    return PoleSet(tuple(sorted(out)), delta)


# ---------------------------------------------------------------------
# oscillation index


def moi_estimate(entries) -> dict:
    """Negative of the largest nontrivial-pole real part over the supplied
    evidence; +inf when every pole set is empty.

    entries: list of dicts with keys 'p', 'chi_label', 'poleset'."""
    if not entries:
        raise ValueError("empty evidence collection")
    best = None
    attained = None
    per_p = {}
    for ent in entries:
        lnp = ent["poleset"].largest()
        if lnp is None:
            continue
        per_p.setdefault(ent["p"], []).append(lnp)
        if best is None or lnp > best:
            best = lnp
            attained = (ent["p"], ent.get("chi_label", "trivial"))
    if best is None:
        return {"moi": inf, "attained_by": None, "stabilized": True}
    primes = {ent["p"] for ent in entries}
    stabilized = all(
        p in per_p and max(per_p[p]) == best for p in primes
    )
    return {
        "moi": -best,
        "attained_by": attained,
        "stabilized": stabilized,
    }
