"""Sparse multivariate integer polynomials and vectorized modular evaluation.

Coefficients are arbitrary-precision Python ints.  The hot path evaluates a
polynomial simultaneously at many points modulo M < 2^41 using int64 numpy
arrays and a split-multiply that never overflows a signed 64-bit word.
"""

from __future__ import annotations

import ast
import json
from dataclasses import dataclass, field

import numpy as np

# Largest modulus the int64 evaluation path accepts; above this the split
# products in modmul could overflow a signed 64-bit accumulator.
MAX_WORD_MODULUS = 1 << 41


def modmul(a, b, m: int):
    """(a * b) % m elementwise for int64 arrays with 0 <= a, b < m < 2^41."""
    hi = a >> 21
    lo = a & 0x1FFFFF
    return (((hi * b) % m << 21) + lo * b) % m


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial in nvars variables as a map exponent-tuple -> coefficient."""

    nvars: int
    terms: dict = field(default_factory=dict)  # tuple[int,...] -> int

    def __post_init__(self):
        clean = {}
        for e, c in self.terms.items():
            e = tuple(int(x) for x in e)
            if len(e) != self.nvars or any(x < 0 for x in e):
                raise ValueError(f"bad exponent vector {e}")
            c = int(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c})

    # -- basic structure ---------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(x == 0 for x in e) for e in self.terms)

    def constant_value(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def max_var_degrees(self) -> list:
        out = [0] * self.nvars
        for e in self.terms:
            for i, x in enumerate(e):
                out[i] = max(out[i], x)
        return out

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = IntPolynomial.constant(self.nvars, other)
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return IntPolynomial(self.nvars, t)

    def __neg__(self):
        return IntPolynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = IntPolynomial.constant(self.nvars, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(
                self.nvars, {e: c * other for e, c in self.terms.items()}
            )
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return IntPolynomial(self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = IntPolynomial.constant(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    @staticmethod
    def constant(nvars: int, c: int) -> "IntPolynomial":
        return IntPolynomial(nvars, {(0,) * nvars: c} if c else {})

    @staticmethod
    def variable(nvars: int, i: int) -> "IntPolynomial":
        e = [0] * nvars
        e[i] = 1
        return IntPolynomial(nvars, {tuple(e): 1})

    # -- evaluation ---------------------------------------------------
    def eval_int(self, point) -> int:
        """Exact evaluation at a tuple of Python integers."""
        total = 0
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t *= x**k
            total += t
        return total

    def eval_mod(self, X: np.ndarray, M: int) -> np.ndarray:
        """Evaluate at many points mod M.

        X has shape (A, nvars) with int64 entries in [0, M); M must be
        below MAX_WORD_MODULUS.
        """
        if M >= MAX_WORD_MODULUS:
            raise ValueError(f"modulus {M} exceeds word-arithmetic limit")
        A = X.shape[0]
        maxdeg = self.max_var_degrees()
        pows = []
        for i in range(self.nvars):
            col = [None, X[:, i] % M] if maxdeg[i] else [None]
            for d in range(2, maxdeg[i] + 1):
                col.append(modmul(col[d - 1], col[1], M))
            pows.append(col)
        acc = np.zeros(A, dtype=np.int64)
        for e in sorted(self.terms):
            t = np.full(A, self.terms[e] % M, dtype=np.int64)
            for i, k in enumerate(e):
                if k:
                    t = modmul(t, pows[i][k], M)
            acc = (acc + t) % M
        return acc

    # -- serialization ------------------------------------------------
    def to_json_dict(self, var_names=None) -> dict:
        if var_names is None:
            var_names = default_var_names(self.nvars)
        return {
            "vars": list(var_names),
            "terms": [
                {"c": str(self.terms[e]), "e": list(e)}
                for e in sorted(self.terms)
            ],
        }

    @staticmethod
    def from_json_dict(d: dict) -> "IntPolynomial":
        n = len(d["vars"])
        terms = {tuple(t["e"]): int(t["c"]) for t in d["terms"]}
        return IntPolynomial(n, terms)

    def __repr__(self):
        names = default_var_names(self.nvars)
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"{names[i]}^{k}" if k > 1 else names[i]
                for i, k in enumerate(e)
                if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def default_var_names(n: int):
    if n <= 3:
        return ["x", "y", "z"][:n]
    return [f"x{i + 1}" for i in range(n)]


def parse_polynomial(text: str, var_names=None) -> IntPolynomial:
    """Parse an expression like 'x^2*(x-1)^3 + 2*y' into an IntPolynomial."""
    text = text.replace("^", "**")
    tree = ast.parse(text, mode="eval")
    if var_names is None:
        found = sorted(
            {n.id for n in ast.walk(tree) if isinstance(n, ast.Name)}
        )
        defaults = default_var_names(max(len(found), 1))
        var_names = defaults if set(found) <= set(defaults) else found
    index = {name: i for i, name in enumerate(var_names)}
    n = len(var_names)

    def build(node):
        if isinstance(node, ast.Expression):
            return build(node.body)
        if isinstance(node, ast.Constant):
            if not isinstance(node.value, int):
                raise ValueError("only integer constants allowed")
            return IntPolynomial.constant(n, node.value)
        if isinstance(node, ast.Name):
            if node.id not in index:
                raise ValueError(f"unknown variable {node.id!r}")
            return IntPolynomial.variable(n, index[node.id])
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -build(node.operand)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.UAdd):
            return build(node.operand)
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                k = node.right
                if not (isinstance(k, ast.Constant) and isinstance(k.value, int)):
                    raise ValueError("exponent must be a literal integer")
                return build(node.left) ** k.value
            left, right = build(node.left), build(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
        raise ValueError(f"unsupported syntax: {ast.dump(node)}")

    return build(tree)


@dataclass(frozen=True)
class ZConstraint:
    """Closed condition on the mod-p reduction: all listed polynomials
    vanish at x mod p.  An empty list means the full affine space."""

    polys: tuple = ()

    @staticmethod
    def all_space() -> "ZConstraint":
        return ZConstraint(())

    @staticmethod
    def of(*polys) -> "ZConstraint":
        return ZConstraint(tuple(polys))

    def is_full(self) -> bool:
        return not self.polys

    def mask_mod_p(self, Xbar: np.ndarray, p: int) -> np.ndarray:
        """Boolean mask over rows of Xbar (entries already reduced mod p)."""
        mask = np.ones(Xbar.shape[0], dtype=bool)
        for g in self.polys:
            mask &= g.eval_mod(Xbar, p) == 0
        return mask

    def count_mod_p(self, p: int, n: int) -> int:
        """#Z(F_p) inside affine n-space."""
        if self.is_full():
            return p**n
        pts = residue_grid(p, n)
        return int(self.mask_mod_p(pts, p).sum())

    def to_json_list(self, var_names=None):
        return [g.to_json_dict(var_names) for g in self.polys]

    @staticmethod
    def from_json_list(lst) -> "ZConstraint":
        return ZConstraint(tuple(IntPolynomial.from_json_dict(d) for d in lst))


def residue_grid(p: int, n: int) -> np.ndarray:
    """All of (Z/p)^n as an (p^n, n) int64 array in lexicographic order."""
    idx = np.arange(p**n, dtype=np.int64)
    cols = []
    for i in range(n - 1, -1, -1):
        cols.append(idx % p)
        idx //= p
    return np.stack(cols[::-1], axis=1)


def load_polynomial(path: str) -> IntPolynomial:
    with open(path, "r", encoding="utf-8") as fh:
        return IntPolynomial.from_json_dict(json.load(fh))
