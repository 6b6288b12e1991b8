"""Exact cyclotomic-rational arithmetic and extended-precision complex folding.

Values that are sums of roots of unity with rational coefficients are kept
exact in a redundant power basis zeta_D^0 .. zeta_D^{D-1}; reduction modulo
the D-th cyclotomic polynomial happens lazily, at equality tests only.
Floating output uses the platform extended type (64-bit mantissa).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

LD = np.longdouble
CLD = np.clongdouble

# extended-precision pi, parsed by numpy from the string
PI_LD = LD("3.14159265358979323846264338327950288420")

_LIMB = 1 << 32


def int_to_ld(n: int) -> np.longdouble:
    """Convert an arbitrary-size integer to longdouble without going
    through a 53-bit double."""
    if -(1 << 62) < n < (1 << 62):
        return LD(n)
    neg = n < 0
    n = abs(n)
    out = LD(0)
    scale = LD(1)
    while n:
        out += LD(n & (_LIMB - 1)) * scale
        scale *= LD(_LIMB)
        n >>= 32
    return -out if neg else out


def frac_to_ld(x: Fraction | int) -> np.longdouble:
    """Fraction -> longdouble, correct to the full 64-bit mantissa."""
    if isinstance(x, int):
        return int_to_ld(x)
    num, den = x.numerator, x.denominator
    if den == 1:
        return int_to_ld(num)
    # scale so the quotient carries >= 80 significant bits
    shift = max(0, 80 + den.bit_length() - num.bit_length())
    q = (num << shift) // den
    return int_to_ld(q) * LD(2.0) ** LD(-shift)


def root_of_unity(d: int, j: int) -> np.clongdouble:
    """exp(2 pi i j / d) in clongdouble."""
    ang = LD(2) * PI_LD * LD(j % d) / LD(d)
    return CLD(np.cos(ang) + 1j * np.sin(ang))


def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (ascending coeffs), den monic
    up to sign at top handled by the caller."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        assert c % lead == 0
        q = c // lead
        out[i] = q
        for k, dk in enumerate(den):
            num[i + k] -= q * dk
    assert all(c == 0 for c in num[: len(den) - 1])
    return out


@lru_cache(maxsize=None)
def cyclotomic_coeffs(d: int) -> tuple[int, ...]:
    """Coefficients (ascending) of the d-th cyclotomic polynomial."""
    if d == 1:
        return (-1, 1)
    num = [0] * (d + 1)
    num[0], num[d] = -1, 1
    for e in range(1, d):
        if d % e == 0:
            num = _poly_div_exact(num, list(cyclotomic_coeffs(e)))
    return tuple(num)


def _reduce_mod_cyclotomic(coeffs: list[Fraction], d: int) -> list[Fraction]:
    """Remainder of sum coeffs[j] x^j modulo Phi_d, ascending dense list."""
    phi = cyclotomic_coeffs(d)
    deg = len(phi) - 1
    work = list(coeffs)
    for i in range(len(work) - 1, deg - 1, -1):
        c = work[i]
        if c:
            work[i] = Fraction(0)
            for k in range(deg):
                work[i - deg + k] -= c * phi[k]
    return work[:deg]


@dataclass(frozen=True)
class Cyclo:
    """Element of Q(zeta_D) in the redundant power basis of length D."""

    order: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.order < 1 or len(self.coeffs) != self.order:
            raise ValueError("coefficient vector must have length = order")

    # -- constructors ------------------------------------------------
    @staticmethod
    def zero(order: int = 1) -> "Cyclo":
        return Cyclo(order, (Fraction(0),) * order)

    @staticmethod
    def from_rational(x, order: int = 1) -> "Cyclo":
        c = [Fraction(0)] * order
        c[0] = Fraction(x)
        return Cyclo(order, tuple(c))

    @staticmethod
    def one(order: int = 1) -> "Cyclo":
        return Cyclo.from_rational(1, order)

    @staticmethod
    def root(order: int, j: int, scale=1) -> "Cyclo":
        c = [Fraction(0)] * order
        c[j % order] = Fraction(scale)
        return Cyclo(order, tuple(c))

    # -- ring operations ---------------------------------------------
    def promote(self, order: int) -> "Cyclo":
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError("can only promote to a multiple order")
        step = order // self.order
        c = [Fraction(0)] * order
        for j, v in enumerate(self.coeffs):
            c[j * step] = v
        return Cyclo(order, tuple(c))

    def _pair(self, other) -> tuple["Cyclo", "Cyclo"]:
        if not isinstance(other, Cyclo):
            other = Cyclo.from_rational(other)
        lcm = self.order * other.order // gcd(self.order, other.order)
        return self.promote(lcm), other.promote(lcm)

    def __add__(self, other):
        a, b = self._pair(other)
        return Cyclo(a.order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.order, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        a, b = self._pair(other)
        return Cyclo(a.order, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return Cyclo(self.order, tuple(f * x for x in self.coeffs))
        a, b = self._pair(other)
        d = a.order
        out = [Fraction(0)] * d
        for j, x in enumerate(a.coeffs):
            if x:
                for k, y in enumerate(b.coeffs):
                    if y:
                        out[(j + k) % d] += x * y
        return Cyclo(d, tuple(out))

    __rmul__ = __mul__

    # -- normal form and comparisons ---------------------------------
    def reduced(self) -> tuple[Fraction, ...]:
        """Canonical coefficients modulo Phi_order (length phi(order))."""
        return tuple(_reduce_mod_cyclotomic(list(self.coeffs), self.order))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.reduced())

    def is_rational(self) -> bool:
        r = self.reduced()
        return all(c == 0 for c in r[1:])

    def rational_value(self) -> Fraction:
        r = self.reduced()
        if any(c != 0 for c in r[1:]):
            raise ValueError("value is not rational")
        return r[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclo.from_rational(other)
        if not isinstance(other, Cyclo):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        # equality is representation-independent (zeta_3 == zeta_6^2), so
        # the hash may only use representation-independent data; rational
        # values hash by value, everything else shares one bucket
        r = self.reduced()
        if all(c == 0 for c in r[1:]):
            return hash(r[0])
        return hash("cyclo-irrational")

    # -- numeric output ----------------------------------------------
    def to_complex(self) -> np.clongdouble:
        """Sum coeffs[j] exp(2 pi i j / D), summed in fixed index order."""
        acc = CLD(0)
        for j, c in enumerate(self.coeffs):
            if c:
                acc = acc + CLD(frac_to_ld(c)) * root_of_unity(self.order, j)
        return acc

    def __repr__(self):
        nz = [(j, c) for j, c in enumerate(self.coeffs) if c]
        if not nz:
            return "Cyclo(0)"
        body = " + ".join(
            f"{c}" if j == 0 else f"{c}*z{self.order}^{j}" for j, c in nz
        )
        return f"Cyclo[{body}]"


def cyclo_to_complex(v: Cyclo) -> np.clongdouble:
    return v.to_complex()
