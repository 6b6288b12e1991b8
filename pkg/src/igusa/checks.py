"""Verification checks over catalog entries and deterministic reports.

Each check returns a plain dict with a ``status`` of ``pass``, ``fail``,
``vacuous`` (nothing applicable) or ``skip`` (over budget), plus numeric
detail.  Reports contain no timing data and are serialized with sorted
keys, so repeated runs — with any worker count — produce identical bytes.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import gcd, inf, lcm

import numpy as np

from .catalog import CatalogEntry, load_catalog
from .charsum import VarietySpec, characters, langweil_ratio
from .counting import BudgetError, sparse_ord_counts
from .expsum import (
    IdentityViolationError,
    critical_split,
    decay_fit,
    exp_sum,
    s_f_composite,
)
from .polys import parse_polynomial
from .resolution import (
    collapse_single,
    estimation_bound_check,
    lct_values,
    multi_rhs,
    pole_order_audit,
    thm_bound_check,
)
from .zeta import (
    bridge_expsum_empirical,
    denef_rational,
    moi_estimate,
    poles,
    series_from_measures,
)

BRIDGE_PRIMES = (3, 5, 7)
DEFAULT_REL_TOL = 1e-9

# fixed coprime moduli pairs for the multiplicativity check
CRT_PAIRS_1VAR = ((4, 9), (8, 27), (9, 25), (7, 16), (5, 49), (9, 49),
                  (25, 27), (16, 27), (13, 49), (32, 49), (48, 49), (44, 45))
CRT_PAIRS_2VAR = ((4, 9), (8, 25), (9, 25), (16, 25), (5, 9), (7, 25),
                  (16, 21), (11, 25), (24, 25), (23, 25))


def jsonable(x):
    """Recursively convert report values to JSON-safe types; exact
    rationals become 'p/q' strings, floats stay floats (17 digits on
    output via repr)."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (np.floating, np.longdouble)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, complex) or isinstance(x, np.complexfloating):
        return {"re": float(x.real), "im": float(x.imag)}
    if x is inf:
        return "inf"
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (frozenset, set)):
        return sorted(jsonable(v) for v in x)
    return x


def _entry_chis(entry: CatalogEntry, q: int):
    """Trivial plus the conductor-1 characters whose order divides
    lcm(N_i) of the entry's resolution data."""
    L = lcm(*[d.N for d in entry.resolution.divisors])
    return [None] + [c for c in characters(q, 1) if L % c.order == 0]


# ---------------------------------------------------------------------
# per-entry checks


def check_bridge(entry: CatalogEntry, primes=BRIDGE_PRIMES, m_max=4,
                 budget=None, rel_tol=DEFAULT_REL_TOL) -> dict:
    """Reconstruction from zeta data vs direct enumeration."""
    points = []
    worst = 0.0
    status = "pass"
    for p in primes:
        for m in range(2, m_max + 1):
            try:
                E = exp_sum(entry.f, entry.Z, p, m, budget=budget)
                B = bridge_expsum_empirical(entry.f, entry.Z, p, m, budget=budget)
            except BudgetError as exc:
                points.append({"p": p, "m": m, "status": "skip",
                               "reason": str(exc)})
                continue
            ref = abs(complex(E.value))
            scale = max(ref, p ** (-m * entry.n / 2))
            diff = abs(complex(E.value) - complex(B))
            ok = diff <= rel_tol * scale
            worst = max(worst, diff / scale)
            points.append({"p": p, "m": m, "status": "pass" if ok else "fail",
                           "diff": diff, "scale": scale})
            if not ok:
                status = "fail"
    if not any(pt["status"] != "skip" for pt in points):
        status = "vacuous"
    return {"status": status, "worst_relative": worst, "points": points}


def check_denef(entry: CatalogEntry, primes=(5, 7), K=6, budget=None) -> dict:
    """Closed form from resolution data vs empirical series, coefficient
    by coefficient as exact cyclotomic rationals."""
    if entry.resolution is None:
        return {"status": "vacuous", "reason": "no resolution data"}
    per_q = []
    status = "pass"
    computed = 0
    for q in primes:
        try:
            meas = sparse_ord_counts(entry.f, entry.Z, q, K, c_max=1,
                                     budget=budget)
        except BudgetError as exc:
            per_q.append({"q": q, "status": "skip", "reason": str(exc)})
            continue
        chi_results = []
        q_ok = True
        for chi in _entry_chis(entry, q):
            emp = series_from_measures(meas, q, chi, K)
            closed = denef_rational(entry.resolution, q, chi).series(K)
            bad = [
                k
                for k in range(K + 1)
                if not (emp.coeff(k) - closed.coeff(k)).is_zero()
            ]
            label = "trivial" if chi is None else f"e={chi.e}(order {chi.order})"
            chi_results.append({"chi": label, "mismatch_at": bad})
            if bad:
                q_ok = False
                status = "fail"
        computed += 1
        per_q.append({"q": q, "status": "pass" if q_ok else "fail",
                      "characters": chi_results})
    if computed == 0:
        status = "vacuous"
    return {"status": status, "K": K, "per_prime": per_q}


def check_decay(entry: CatalogEntry, budget=None) -> dict:
    """Supremum of |E| p^{sigma m} / m^{n-1} over the recorded grid stays
    below the entry's recorded constant."""
    sup = 0.0
    slope = None
    tables = []
    for p, ms in entry.decay_grid:
        rep = decay_fit(entry.f, entry.Z, entry.sigma, [p], ms, budget=budget)
        sup = max(sup, rep["supremum"])
        tables.append({
            "p": p,
            "ratios": [
                {"m": m, "ratio": rep["ratios"][(p, m)]}
                for m in ms
            ],
        })
        slope = rep["slope"] if slope is None else slope
    if not tables:
        return {"status": "vacuous"}
    ok = sup <= entry.decay_constant or (sup == 0.0 == entry.decay_constant)
    return {
        "status": "pass" if ok else "fail",
        "supremum": sup,
        "recorded_constant": entry.decay_constant,
        "sigma": entry.sigma,
        "tables": tables,
    }


def check_crt(entry: CatalogEntry, budget=None, tol=1e-12) -> dict:
    """Factorization of the normalized complete sum over coprime moduli.

    The exact identity is S_f(ab) = S_{b'f}(a) * S_{a'f}(b) with
    b*b' + a*a' = 1 mod ab (the residue splitting of 1/(ab)); the naive
    untwisted product S_f(a) * S_f(b) differs whenever the unit twists
    act nontrivially, and is reported per pair as information only.
    """
    pairs = CRT_PAIRS_1VAR if entry.n == 1 else CRT_PAIRS_2VAR
    rows = []
    status = "pass"
    for a, b in pairs:
        assert gcd(a, b) == 1
        bb = pow(b, -1, a)
        aa = pow(a, -1, b)
        sab = complex(s_f_composite(entry.f, a * b, budget=budget))
        left = complex(s_f_composite(entry.f * bb, a, budget=budget))
        right = complex(s_f_composite(entry.f * aa, b, budget=budget))
        naive = complex(s_f_composite(entry.f, a, budget=budget)) * complex(
            s_f_composite(entry.f, b, budget=budget)
        )
        diff = abs(sab - left * right)
        ok = diff <= tol
        rows.append({"a": a, "b": b, "diff": float(diff),
                     "untwisted_matches": bool(abs(sab - naive) <= tol),
                     "status": "pass" if ok else "fail"})
        if not ok:
            status = "fail"
    return {"status": status, "tolerance": tol, "pairs": rows}


def check_split(entry: CatalogEntry, m_values=(2, 3), budget=None) -> dict:
    """Critical-value splitting identity at the smallest valid primes."""
    rows = []
    status = "pass"
    for p in entry.primes:
        if p < entry.p_threshold:
            continue
        try:
            zs = entry.crit_values_mod(p, 1)
        except ValueError:
            continue
        if len(set(z % p for z in zs)) != len(zs):
            continue  # critical values collide mod p: not a valid split
        for m in m_values:
            if p ** (m * entry.n) > 10**7:
                continue
            try:
                rep = critical_split(entry.f, [z % p for z in zs], entry.Z,
                                     p, m, budget=budget)
                rows.append({"p": p, "m": m, "status": "pass",
                             "residual": rep["residual"]})
            except IdentityViolationError as exc:
                rows.append({"p": p, "m": m, "status": "fail",
                             "residual": exc.report["residual"]})
                status = "fail"
            except BudgetError as exc:
                rows.append({"p": p, "m": m, "status": "skip",
                             "reason": str(exc)})
        break  # one prime suffices for the default run
    if not rows:
        return {"status": "vacuous"}
    return {"status": status, "points": rows}


def check_thm_bound(entry: CatalogEntry) -> dict:
    """Witnessed upper bound on the threshold, with exact slack."""
    res = entry.resolution
    if res is None or not res.witnesses:
        return {"status": "vacuous"}
    c, _ = lct_values(res)
    rows = []
    status = "pass"
    for w in res.witnesses:
        rep = thm_bound_check(res, w, c)
        rows.append({
            "I": sorted(w.ids),
            "d": w.d,
            "lct": rep["lct"],
            "rhs": rep["rhs"],
            "slack": rep["slack"],
            "status": "pass" if rep["satisfied"] else "fail",
        })
        if not rep["satisfied"]:
            status = "fail"
    return {"status": status, "witnesses": rows}


def check_estimation(entry: CatalogEntry, primes=(3, 5, 7),
                     m_values=(2, 3, 5, 8, 13)) -> dict:
    """Coefficient-extraction estimate on the entry's own divisor data."""
    res = entry.resolution
    if res is None:
        return {"status": "vacuous"}
    pairs = [(d.N, d.nu) for d in res.divisors]
    _, lz = lct_values(res)
    rows = []
    status = "pass"
    for q in primes:
        for m in m_values:
            rep = estimation_bound_check(pairs, q, m, lz)
            if not rep["hypothesis_ok"]:
                rows.append({"q": q, "m": m, "status": "vacuous"})
                continue
            rows.append({"q": q, "m": m, "lhs": rep["lhs"],
                         "rhs_float": rep["rhs_float"],
                         "status": "pass" if rep["holds"] else "fail"})
            if not rep["holds"]:
                status = "fail"
    if all(r["status"] == "vacuous" for r in rows):
        status = "vacuous"
    return {"status": status, "points": rows}


def check_pole_audit(entry: CatalogEntry, q=None) -> dict:
    """Maximal-pole-order consequence lct_Z <= 1/d on full-codimension strata."""
    res = entry.resolution
    if res is None:
        return {"status": "vacuous"}
    q = q if q is not None else entry.primes[0]
    L = lcm(*[d.N for d in res.divisors])
    rows = []
    status = "pass"
    any_hit = False
    for d in sorted({1} | {d for d in range(2, L + 1) if L % d == 0}):
        rep = pole_order_audit(res, d, q)
        rows.append({"d": d, "vacuous": rep["vacuous"],
                     "status": "pass" if rep["passed"] else "fail",
                     "strata": rep["strata"]})
        if not rep["vacuous"]:
            any_hit = True
        if not rep["passed"]:
            status = "fail"
    if not any_hit and status == "pass":
        status = "vacuous"
    return {"status": status, "q": q, "orders": rows}


def check_moi(entry: CatalogEntry) -> dict:
    """Oscillation-index estimate from the closed-form pole sets, compared
    with the entry's expected value and the threshold inequality."""
    res = entry.resolution
    if res is None:
        return {"status": "vacuous"}
    evidence = []
    for p in entry.primes:
        if p < entry.p_threshold:
            continue
        for chi in _entry_chis(entry, p):
            R = denef_rational(res, p, chi)
            label = "trivial" if chi is None else f"e={chi.e}(order {chi.order})"
            evidence.append({"p": p, "chi_label": label, "poleset": poles(R)})
    est = moi_estimate(evidence)
    _, lz = lct_values(res)
    moi = est["moi"]
    rows = {
        "moi": moi,
        "stabilized": est["stabilized"],
        "attained_by": est["attained_by"],
        "lct_Z": lz,
        "moi_ge_lct": (moi is inf) or moi >= lz,
    }
    status = "pass"
    expected = entry.moi_expected_value()
    if expected is not None and moi != expected:
        status = "fail"
    if not rows["moi_ge_lct"]:
        status = "fail"
    # consistency: moi <= 1 exactly when moi equals the threshold
    if (moi is not inf and moi <= 1) != (moi == lz):
        status = "fail"
    rows["status"] = status
    rows["expected"] = entry.moi_expected
    return rows


# ---------------------------------------------------------------------
# global checks


def check_langweil(budget=None) -> dict:
    """Point-count deviation ratios: elliptic curve bounded by 2 (Hasse),
    graph and affine plane exactly 0."""
    import sympy

    ell = VarietySpec(2, (parse_polynomial("y^2 - x^3 + x"),), None, 1)
    graph = VarietySpec(2, (parse_polynomial("y - x^2"),), None, 1)
    plane = VarietySpec(2, (), None, 2)
    ps = list(sympy.primerange(5, 48))
    r_ell = langweil_ratio(ell, ps, budget=budget)
    r_graph = langweil_ratio(graph, ps, budget=budget)
    r_plane = langweil_ratio(plane, [5, 7, 11], budget=budget)
    ok = (r_ell["max_ratio"] <= 2 and r_graph["max_ratio"] == 0
          and r_plane["max_ratio"] == 0)
    return {
        "status": "pass" if ok else "fail",
        "elliptic_max_ratio": r_ell["max_ratio"],
        "graph_max_ratio": r_graph["max_ratio"],
        "plane_max_ratio": r_plane["max_ratio"],
    }


def check_collapse_random(count=200, seed=20260823) -> dict:
    """Random-data equivalence of the multi-divisor and collapsed bounds."""
    rng = random.Random(seed)
    failures = 0
    for _ in range(count):
        k = rng.randint(1, 3)
        pairs = [(rng.randint(1, 6), rng.randint(1, 6)) for _ in range(k)]
        d = rng.randint(2, 5)
        c = Fraction(rng.randint(1, 12), rng.randint(1, 12))
        col = collapse_single(pairs, d)
        lhs = c <= multi_rhs(pairs, d, c)
        rhs = c <= col["single_bound"]
        if lhs != rhs:
            failures += 1
    return {"status": "pass" if failures == 0 else "fail",
            "count": count, "failures": failures, "seed": seed}


def check_estimation_random(count=200, seed=20260823) -> dict:
    """Coefficient estimate on random divisor tuples."""
    rng = random.Random(seed)
    failures = 0
    for _ in range(count):
        k = rng.randint(1, 3)
        pairs = [(rng.randint(1, 6), rng.randint(1, 6)) for _ in range(k)]
        q = rng.choice([3, 5, 7])
        m = rng.randint(2, 40)
        lct = min(Fraction(nu, N) for N, nu in pairs)
        rep = estimation_bound_check(pairs, q, m, lct)
        if not (rep["hypothesis_ok"] and rep["holds"]):
            failures += 1
    return {"status": "pass" if failures == 0 else "fail",
            "count": count, "failures": failures, "seed": seed}


# ---------------------------------------------------------------------
# orchestration

ENTRY_CHECKS = {
    "bridge": check_bridge,
    "denef": check_denef,
    "decay": check_decay,
    "crt": check_crt,
    "split": check_split,
    "thm-bound": check_thm_bound,
    "estimation": check_estimation,
    "pole-audit": check_pole_audit,
    "moi": check_moi,
}

GLOBAL_CHECKS = {
    "langweil": check_langweil,
    "collapse-random": check_collapse_random,
    "estimation-random": check_estimation_random,
}


def run_entry(entry: CatalogEntry, checks=None, budget=None) -> dict:
    names = sorted(ENTRY_CHECKS) if checks is None else sorted(checks)
    out = {}
    for name in names:
        if name not in ENTRY_CHECKS:
            raise KeyError(f"unknown check {name!r}")
        fn = ENTRY_CHECKS[name]
        try:
            if name in ("bridge", "denef", "decay", "crt", "split"):
                out[name] = fn(entry, budget=budget)
            else:
                out[name] = fn(entry)
        except BudgetError as exc:
            out[name] = {"status": "skip", "reason": str(exc)}
    return out


def run_all(checks=None, budget=None, threads=1, primes=None) -> dict:
    """Run the default check set over the whole catalog plus the global
    checks; deterministic regardless of thread count."""
    entries = load_catalog()
    if primes:
        entries = [
            _restrict_entry(e, tuple(p for p in e.primes if p in primes))
            for e in entries
        ]
    results = {}

    def work(ent):
        return ent.name, run_entry(ent, checks=checks, budget=budget)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for name, rep in pool.map(work, entries):
                results[name] = rep
    else:
        for ent in entries:
            results[ent.name] = work(ent)[1]
    glob = {}
    for name in sorted(GLOBAL_CHECKS):
        if checks is not None and name not in checks:
            continue
        try:
            glob[name] = GLOBAL_CHECKS[name]()
        except BudgetError as exc:
            glob[name] = {"status": "skip", "reason": str(exc)}

    statuses = []
    for rep in results.values():
        statuses += [c["status"] for c in rep.values()]
    statuses += [c["status"] for c in glob.values()]
    summary = {s: statuses.count(s) for s in ("pass", "fail", "vacuous", "skip")}
    return {
        "entries": {k: results[k] for k in sorted(results)},
        "global": glob,
        "summary": summary,
        "all_passed": summary["fail"] == 0,
    }


def _restrict_entry(e: CatalogEntry, primes):
    from dataclasses import replace

    grid = tuple((p, ms) for p, ms in e.decay_grid if p in primes)
    return replace(e, primes=primes, decay_grid=grid)


def report_to_json(report: dict) -> str:
    return json.dumps(jsonable(report), indent=1, sort_keys=True) + "\n"
