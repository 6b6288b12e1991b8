"""Residue enumeration: exact (valuation, unit-part) histograms of f-values.

Two strategies feed everything downstream:

* ``count_tensor`` enumerates all of (Z/p^m)^n (restricted to the mod-p
  constraint) in fixed-order blocks and histograms f(x) by valuation and
  unit part.  Cost is p^{mn} points, guarded by a budget.

* ``sparse_ord_counts`` refines residue classes depth by depth, discarding
  classes as soon as their valuation and unit part are determined.  It
  returns exact measures of the classes {ord f = k, unit = u} and is the
  workhorse for series coefficients at large moduli.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .polys import IntPolynomial, ZConstraint, residue_grid

DEFAULT_BUDGET = 200_000_000
_CHUNK = 1 << 22


class BudgetError(Exception):
    """Raised when an enumeration would exceed the configured point budget."""

    def __init__(self, required: int, description: str):
        self.required = required
        super().__init__(f"budget: {description} requires {required} points")


def point_budget(budget=None) -> int:
    if budget is not None:
        return int(budget)
    env = os.environ.get("IGUSA_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def check_budget(required: int, description: str, budget=None):
    if required > point_budget(budget):
        raise BudgetError(required, description)


@dataclass(frozen=True)
class CountTensor:
    """Exact value histogram over x mod p^m with x-bar in Z(F_p).

    counts[k] is a pair of aligned int64 arrays (units, tallies): tallies[i]
    points x with ord_p f(x) = k and unit part congruent to units[i] modulo
    p^{min(c_max, m-k)}.  n_ge_m counts x with f(x) = 0 mod p^m.
    """

    p: int
    m: int
    n: int
    c_max: int
    counts: dict  # k -> (units ndarray, tallies ndarray), sorted by unit
    n_ge_m: int
    z_count: int  # #Z(F_p)

    def total_points(self) -> int:
        return sum(int(t.sum()) for _, t in self.counts.values()) + self.n_ge_m

    def expected_points(self) -> int:
        return self.z_count * self.p ** ((self.m - 1) * self.n)

    def domain_measure(self) -> Fraction:
        return Fraction(self.z_count, self.p**self.n)

    def value_histogram(self) -> np.ndarray:
        """Dense histogram h[v] = #{x : f(x) = v mod p^m}.

        Only valid when c_max >= m (full unit parts); used by the
        exponential-sum fold and its exact-zero test.
        """
        if self.c_max < self.m:
            raise ValueError("value histogram needs full unit depth c_max >= m")
        q = self.p**self.m
        h = np.zeros(q, dtype=np.int64)
        h[0] = self.n_ge_m
        for k, (units, tallies) in self.counts.items():
            h[units * self.p**k] = tallies
        return h


def _classify(values: np.ndarray, p: int, m: int, c_max: int):
    """Split f-values mod p^m into (k, unit) classes.

    Returns (k_arr, unit_arr, ge_m_mask); unit_arr is reduced modulo
    p^{min(c_max, m-k)} and meaningless where ge_m_mask is set.
    """
    v = values.copy()
    k = np.zeros(v.shape, dtype=np.int64)
    ge = v == 0
    live = ~ge
    for _ in range(m - 1):
        div = live & (v % p == 0)
        if not div.any():
            break
        v[div] //= p
        k[div] += 1
    unit = np.zeros_like(v)
    depth = np.minimum(c_max, m - k)
    # moduli p^depth vary by element; loop over the few distinct depths
    for d in np.unique(depth[live]):
        sel = live & (depth == d)
        unit[sel] = v[sel] % p ** int(d)
    return k, unit, ge


def count_tensor(
    f: IntPolynomial,
    Z: ZConstraint,
    p: int,
    m: int,
    c_max: int,
    budget=None,
) -> CountTensor:
    """Full enumeration of (Z/p^m)^n restricted to the mod-p constraint."""
    n = f.nvars
    total = p ** (m * n)
    check_budget(total, f"{p}^{m * n}", budget)
    q = p**m
    z_count = Z.count_mod_p(p, n)

    # accumulate as sorted (k*q + unit, tally) arrays: the number of
    # distinct classes can reach p^m, far too many for a python dict
    acc_keys = np.empty(0, dtype=np.int64)
    acc_tal = np.empty(0, dtype=np.int64)
    n_ge_m = 0
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        X = np.empty((idx.shape[0], n), dtype=np.int64)
        w = idx
        for i in range(n - 1, -1, -1):
            X[:, i] = w % q
            w = w // q
        if not Z.is_full():
            keep = Z.mask_mod_p(X % p, p)
            X = X[keep]
            if X.shape[0] == 0:
                continue
        vals = f.eval_mod(X, q)
        k_arr, unit, ge = _classify(vals, p, m, c_max)
        n_ge_m += int(ge.sum())
        live = ~ge
        uk, uc = np.unique(k_arr[live] * q + unit[live], return_counts=True)
        keys = np.concatenate([acc_keys, uk])
        tal = np.concatenate([acc_tal, uc])
        order = np.argsort(keys, kind="stable")
        keys, tal = keys[order], tal[order]
        new = np.empty(keys.shape[0], dtype=bool)
        if keys.shape[0]:
            new[0] = True
            new[1:] = keys[1:] != keys[:-1]
            acc_keys = keys[new]
            acc_tal = np.add.reduceat(tal, np.flatnonzero(new))

    counts = {}
    ks = acc_keys // q
    for k in np.unique(ks):
        sel = ks == k
        counts[int(k)] = (acc_keys[sel] % q, acc_tal[sel])
    return CountTensor(p, m, n, c_max, counts, n_ge_m, z_count)


def value_histogram_counts(
    f: IntPolynomial,
    Z: ZConstraint,
    p: int,
    m: int,
    budget=None,
):
    """Dense histogram h[v] = #{x mod p^m : x-bar in Z(F_p), f(x) = v mod
    p^m} plus #Z(F_p), accumulated chunk by chunk.  Memory stays at one
    int64 array of length p^m, unlike the per-class tensor."""
    n = f.nvars
    total = p ** (m * n)
    check_budget(total, f"{p}^{m * n}", budget)
    q = p**m
    h = np.zeros(q, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        X = np.empty((idx.shape[0], n), dtype=np.int64)
        w = idx
        for i in range(n - 1, -1, -1):
            X[:, i] = w % q
            w = w // q
        if not Z.is_full():
            keep = Z.mask_mod_p(X % p, p)
            X = X[keep]
            if X.shape[0] == 0:
                continue
        vals = f.eval_mod(X, q)
        h += np.bincount(vals, minlength=q)
    return h, Z.count_mod_p(p, n)


def sparse_ord_counts(
    f: IntPolynomial,
    Z: ZConstraint,
    p: int,
    K: int,
    c_max: int,
    budget=None,
):
    """Exact measures of {x in Z_p^n : x-bar in Z(F_p), ord f(x) = k,
    unit part = u mod p^{c_max}} for 0 <= k <= K.

    Returns a dict k -> dict u -> Fraction.  Classes are refined one p-adic
    digit at a time and retired as soon as valuation and unit depth are
    pinned down; the budget counts residue classes ever generated.
    """
    n = f.nvars
    M = K + c_max  # depth at which every contributing class resolves
    meas = {k: {} for k in range(K + 1)}
    state = {"generated": 0, "cap": point_budget(budget)}
    offs = residue_grid(p, n).astype(np.int64)
    # refinement chunk: parents expand by p^n children at the next depth
    chunk = max(1, _CHUNK // p**n)

    def refine(reps: np.ndarray, j: int):
        """Classify depth-j classes; recurse (depth first, in chunks) on
        the classes whose valuation or unit part is still undetermined."""
        pj = p**j
        vals = f.eval_mod(reps, pj)
        v = np.zeros(vals.shape[0], dtype=np.int64)
        w = vals.copy()
        zero = w == 0
        v[zero] = j
        nz = ~zero
        while True:
            d = nz & (w % p == 0)
            if not d.any():
                break
            w[d] //= p
            v[d] += 1
        # after the loop w = vals // p^v on nonzero entries
        resolved = nz & (v + c_max <= j)
        if resolved.any():
            rv = v[resolved]
            runit = w[resolved] % p**c_max
            mass = Fraction(1, p ** (j * n))
            for k in np.unique(rv):
                if k > K:
                    continue
                uu, cc = np.unique(runit[rv == k], return_counts=True)
                bucket = meas[int(k)]
                for u, c in zip(uu.tolist(), cc.tolist()):
                    bucket[u] = bucket.get(u, Fraction(0)) + c * mass
        if j == M:
            return
        # survivors: unresolved classes whose valuation might still be <= K
        survivors = reps[~resolved & ~(nz & (v > K))]
        for start in range(0, survivors.shape[0], chunk):
            part = survivors[start : start + chunk]
            A = part.shape[0]
            state["generated"] += A * p**n
            if state["generated"] > state["cap"]:
                raise BudgetError(
                    state["generated"], f"refinement classes at depth {j + 1}"
                )
            kids = part[:, None, :] + offs[None, :, :] * p**j
            refine(kids.reshape(A * p**n, n), j + 1)

    grid = residue_grid(p, n)
    if not Z.is_full():
        grid = grid[Z.mask_mod_p(grid, p)]
    state["generated"] = grid.shape[0]
    if state["generated"] > state["cap"]:
        raise BudgetError(state["generated"], "depth-1 classes")
    for start in range(0, grid.shape[0], _CHUNK):
        refine(grid[start : start + _CHUNK].astype(np.int64), 1)
    return meas
