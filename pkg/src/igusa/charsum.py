"""Multiplicative characters of (Z/p^c)^x, Gauss coefficients, character
sums over affine varieties, Kummer-cover point counts and Lang-Weil ratios.

Characters are stored through a discrete-log table for a fixed generator;
values are exact roots of unity (Cyclo).  p = 2 is excluded throughout:
(Z/2^c)^x is not cyclic and nothing downstream needs it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np
import sympy

from .cyclo import Cyclo
from .counting import check_budget
from .polys import IntPolynomial, ZConstraint, residue_grid


def primitive_root(p: int, c: int = 1) -> int:
    """Generator of (Z/p^c)^x for an odd prime p."""
    if p == 2:
        raise ValueError("p = 2 excluded: unit group not cyclic")
    factors = list(sympy.factorint(p - 1))
    g = 2
    while True:
        if all(pow(g, (p - 1) // ell, p) != 1 for ell in factors):
            break
        g += 1
    if c > 1 and pow(g, p - 1, p * p) == 1:
        g += p  # g generates mod p but not mod p^2; the shift fixes it
    return g


def _dlog_table(p: int, c: int, g: int) -> np.ndarray:
    """dlog[u] = t with g^t = u mod p^c; -1 at non-units."""
    q = p**c
    phi = q - q // p
    table = np.full(q, -1, dtype=np.int64)
    acc = 1
    for t in range(phi):
        table[acc] = t
        acc = acc * g % q
    return table


@dataclass(frozen=True)
class MultChar:
    """Character chi_e of (Z/p^c)^x: chi(g^t) = zeta_phi^{e t}."""

    p: int
    c: int
    g: int
    e: int
    dlog: np.ndarray = field(repr=False, compare=False)

    @property
    def phi(self) -> int:
        q = self.p**self.c
        return q - q // self.p

    @property
    def order(self) -> int:
        return self.phi // gcd(self.phi, self.e)

    @property
    def conductor(self) -> int:
        """Smallest c' >= 1 with chi trivial on 1 + p^{c'}."""
        for cp in range(1, self.c):
            t = int(self.dlog[(1 + self.p**cp) % self.p**self.c])
            if self.e * t % self.phi == 0:
                return cp
        return 1 if self.is_trivial() else self.c

    def is_trivial(self) -> bool:
        return self.e % self.phi == 0

    def __call__(self, u: int) -> Cyclo:
        """chi(u) as an exact root of unity of order = order(chi); 0 at
        non-units (the chi(0) = 0 convention extends to all of Z/p^c)."""
        u = int(u) % self.p**self.c
        if u % self.p == 0:
            return Cyclo.zero(self.order)
        t = int(self.dlog[u])
        d = self.order
        j = self.e * t * d // self.phi % d
        return Cyclo.root(d, j)

    def value_exponents(self, units: np.ndarray) -> np.ndarray:
        """Vector of exponents j with chi(u) = zeta_order^j, for unit inputs."""
        t = self.dlog[np.asarray(units) % self.p**self.c]
        if (t < 0).any():
            raise ValueError("non-unit input")
        d = self.order
        return self.e * t * d // self.phi % d

    def inverse(self) -> "MultChar":
        return MultChar(self.p, self.c, self.g, (-self.e) % self.phi, self.dlog)


def characters(
    p: int,
    c: int,
    order_divides: int | None = None,
    conductor: int | None = None,
    include_trivial: bool = False,
):
    """Characters of (Z/p^c)^x, filtered by order and exact conductor."""
    if p == 2:
        raise ValueError("p = 2 excluded")
    g = primitive_root(p, c)
    dlog = _dlog_table(p, c, g)
    q = p**c
    phi = q - q // p
    out = []
    for e in range(phi):
        chi = MultChar(p, c, g, e, dlog)
        if chi.is_trivial() and not include_trivial:
            continue
        if order_divides is not None and order_divides % chi.order != 0:
            continue
        if conductor is not None and chi.conductor != conductor:
            continue
        out.append(chi)
    return out


def trivial_character(p: int, c: int = 1) -> MultChar:
    g = primitive_root(p, c)
    return MultChar(p, c, g, 0, _dlog_table(p, c, g))


def gauss_coefficient(chi: MultChar, m: int | None = None) -> Cyclo:
    """The constant multiplying twisted-series coefficients in the
    sum-from-zeta reconstruction:

        g = p^{1-c} (p-1)^{-1} sum_{u in (Z/p^c)^x} chi(u) e^{2 pi i u/p^c}

    with c = c(chi).  Independent of the additive level m for the standard
    character family; exact, of root-of-unity order lcm(order(chi), p^c).
    """
    if chi.is_trivial():
        raise ValueError("Gauss coefficient needs a nontrivial character")
    p, c = chi.p, chi.conductor
    pc = p**c
    d = chi.order
    L = d * pc // gcd(d, pc)
    acc = Cyclo.zero(L)
    # work in the conductor-c quotient group
    for u in range(1, pc):
        if u % p == 0:
            continue
        j = chi.value_exponents(np.array([u]))[0]
        acc = acc + Cyclo.root(L, int(j) * (L // d)) * Cyclo.root(L, u * (L // pc))
    scale = Fraction(1, p ** (c - 1) * (p - 1))
    return acc * scale


@dataclass(frozen=True)
class VarietySpec:
    """Affine variety X in A^n cut out by equations, with a regular
    function F and expected dimension r."""

    n: int
    equations: tuple = ()
    F: IntPolynomial | None = None
    r: int = 0

    def points_mod_p(self, p: int, budget=None) -> np.ndarray:
        check_budget(p**self.n, f"{p}^{self.n}", budget)
        X = residue_grid(p, self.n)
        for g in self.equations:
            X = X[g.eval_mod(X, p) == 0]
        return X

    def count_points(self, p: int, budget=None) -> int:
        return int(self.points_mod_p(p, budget).shape[0])


def char_sum_variety(X: VarietySpec, chi: MultChar, p: int, budget=None) -> Cyclo:
    """Exact sum of chi(F(x)) over X(F_p), with chi(0) = 0."""
    if chi.c != 1 or chi.p != p:
        raise ValueError("character must live on F_p^x")
    pts = X.points_mod_p(p, budget)
    vals = X.F.eval_mod(pts, p)
    vals = vals[vals % p != 0]
    d = chi.order
    acc = [Fraction(0)] * d
    js, cnt = np.unique(chi.value_exponents(vals), return_counts=True)
    for j, cxx in zip(js.tolist(), cnt.tolist()):
        acc[j] += cxx
    return Cyclo(d, tuple(acc))


def kummer_count(X: VarietySpec, d: int, lam: int, p: int, budget=None) -> int:
    """#{(x, y) : x in X(F_p), F(x) = lam * y^d mod p}."""
    if d <= 1 or lam % p == 0:
        raise ValueError("need d > 1 and lam a unit")
    if p % d == 0:
        raise ValueError("p must not divide d")
    pts = X.points_mod_p(p, budget)
    vals = X.F.eval_mod(pts, p)
    # how many y solve lam*y^d = v, for each residue v
    y = np.arange(p, dtype=np.int64)
    yd = np.ones(p, dtype=np.int64)
    for _ in range(d):
        yd = yd * y % p
    powers = np.bincount(lam % p * yd % p, minlength=p)
    return int(powers[vals].sum())


def langweil_ratio(X: VarietySpec, primes, budget=None) -> dict:
    """max over primes of |#X(F_p) - p^r| / p^(r - 1/2)."""
    table = {}
    worst = 0.0
    for p in primes:
        cnt = X.count_points(p, budget)
        ratio = abs(cnt - p**X.r) / p ** (X.r - 0.5)
        table[p] = {"count": cnt, "ratio": ratio}
        worst = max(worst, ratio)
    return {"per_prime": table, "max_ratio": worst}
