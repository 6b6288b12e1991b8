"""Command-line surface: compute sums and zeta data, run verification
checks, and emit deterministic JSON reports.

Exit codes: 0 all requested checks passed, 1 a check failed, 2 budget
exceeded or invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import checks as checks_mod
from .catalog import get_entry, load_catalog
from .charsum import characters, gauss_coefficient
from .checks import report_to_json
from .counting import BudgetError
from .expsum import exp_sum
from .polys import load_polynomial, parse_polynomial
from .resolution import load_resolution
from .zeta import bridge_expsum_empirical, denef_rational, poles, zeta_series_empirical


def _get_poly(spec: str):
    """'@path' loads a polynomial JSON file; anything else is parsed as an
    expression in x, y, z (or x1..xk)."""
    if spec.startswith("@"):
        return load_polynomial(spec[1:])
    return parse_polynomial(spec)


def _full_Z(nvars: int):
    from .polys import ZConstraint

    return ZConstraint.all_space()


def _pick_chi(p: int, order: int | None, e: int | None, conductor: int):
    if order in (None, 1) and e in (None, 0):
        return None  # trivial character
    for chi in characters(p, conductor):
        if order is not None and chi.order != order:
            continue
        if e is not None and chi.e != e:
            continue
        return chi
    raise ValueError(
        f"no character mod {p}^{conductor} with the requested order/exponent"
    )


def _series_dict(series):
    out = []
    for k in range(series.K + 1):
        c = series.coeff(k)
        if c.is_rational():
            out.append({"k": k, "value": c.rational_value()})
        else:
            z = c.to_complex()
            out.append({
                "k": k,
                "order": c.order,
                "coeffs": list(c.coeffs),
                "approx": complex(z),
            })
    return out


def _emit(payload: dict, out_path: str | None):
    text = report_to_json(payload)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_common(sp, poly=False, prime=False, level=False, order=False):
    if poly:
        sp.add_argument("poly", help="polynomial expression or @file.json")
    if prime:
        sp.add_argument("--prime", "-p", type=int, required=True)
    if level:
        sp.add_argument("--level", "-m", type=int, required=True)
    if order:
        sp.add_argument("--order", "-K", type=int, default=8,
                        help="series truncation order")
    sp.add_argument("--budget", type=int, default=None,
                    help="max enumerated points (overrides IGUSA_BUDGET)")
    sp.add_argument("--out", default=None, help="write report to this path")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="igusa",
        description="Exact p-adic exponential sums, local zeta functions, "
        "and verification checks over a catalog of worked polynomials.",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("expsum", help="exponential sum E at level m")
    _add_common(sp, poly=True, prime=True, level=True)

    sp = sub.add_parser("zeta-emp", help="empirical zeta series prefix")
    _add_common(sp, poly=True, prime=True, order=True)
    sp.add_argument("--chi-order", type=int, default=None)
    sp.add_argument("--chi-e", type=int, default=None)
    sp.add_argument("--conductor", type=int, default=1)

    sp = sub.add_parser("zeta-denef",
                        help="closed form from a resolution data file")
    sp.add_argument("resolution", help="resolution JSON file or entry:<name>")
    sp.add_argument("--prime", "-p", type=int, required=True)
    sp.add_argument("--order", "-K", type=int, default=8)
    sp.add_argument("--chi-order", type=int, default=None)
    sp.add_argument("--chi-e", type=int, default=None)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("bridge",
                        help="reconstruct E from zeta data and compare")
    _add_common(sp, poly=True, prime=True, level=True)

    sp = sub.add_parser("bound", help="threshold upper-bound witnesses")
    sp.add_argument("entry")
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("audit-poles", help="pole orders and moi estimate")
    sp.add_argument("entry")
    sp.add_argument("--prime", "-p", type=int, default=None)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("decay", help="decay-ratio table for an entry")
    sp.add_argument("entry")
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("charsum", help="Gauss coefficients mod p")
    sp.add_argument("--prime", "-p", type=int, required=True)
    sp.add_argument("--conductor", type=int, default=1)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("langweil", help="point-count deviation ratios")
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("verify", help="run checks on one catalog entry")
    sp.add_argument("entry")
    sp.add_argument("--checks", default=None,
                    help="comma-separated subset of "
                    + ",".join(sorted(checks_mod.ENTRY_CHECKS)))
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("run-all", help="run checks over the whole catalog")
    sp.add_argument("--checks", default=None)
    sp.add_argument("--primes", default=None,
                    help="comma-separated primes to restrict entries to")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("list", help="catalog entries")
    sp.add_argument("--out", default=None)
    return ap


def _cmd_expsum(args) -> int:
    f = _get_poly(args.poly)
    E = exp_sum(f, _full_Z(f.nvars), args.prime, args.level, budget=args.budget)
    _emit({
        "f": f.to_json_dict(),
        "p": args.prime,
        "m": args.level,
        "value": complex(E.value),
        "magnitude": E.magnitude(),
        "exact_zero": E.exact_zero,
    }, args.out)
    return 0


def _cmd_zeta_emp(args) -> int:
    f = _get_poly(args.poly)
    chi = _pick_chi(args.prime, args.chi_order, args.chi_e, args.conductor)
    s = zeta_series_empirical(f, _full_Z(f.nvars), args.prime, chi,
                              args.order, budget=args.budget)
    _emit({
        "f": f.to_json_dict(),
        "p": args.prime,
        "chi": "trivial" if chi is None else
        {"conductor": chi.c, "order": chi.order, "e": chi.e},
        "coefficients": _series_dict(s),
    }, args.out)
    return 0


def _cmd_zeta_denef(args) -> int:
    if args.resolution.startswith("entry:"):
        ent = get_entry(args.resolution[6:])
        if ent.resolution is None:
            raise ValueError(f"entry {ent.name!r} has no resolution data")
        res = ent.resolution
    else:
        res = load_resolution(args.resolution)
    chi = _pick_chi(args.prime, args.chi_order, args.chi_e, 1)
    R = denef_rational(res, args.prime, chi)
    P = poles(R)
    _emit({
        "q": args.prime,
        "chi": "trivial" if chi is None else
        {"conductor": chi.c, "order": chi.order, "e": chi.e},
        "n_terms": len(R.terms),
        "coefficients": _series_dict(R.series(args.order)),
        "poles": [{"real_part": s, "order": o} for s, o in P.poles],
    }, args.out)
    return 0


def _cmd_bridge(args) -> int:
    f = _get_poly(args.poly)
    Z = _full_Z(f.nvars)
    E = exp_sum(f, Z, args.prime, args.level, budget=args.budget)
    B = bridge_expsum_empirical(f, Z, args.prime, args.level,
                                budget=args.budget)
    diff = abs(complex(E.value) - complex(B))
    scale = max(abs(complex(E.value)),
                args.prime ** (-args.level * f.nvars / 2))
    ok = diff <= 1e-9 * scale
    _emit({
        "p": args.prime,
        "m": args.level,
        "direct": complex(E.value),
        "bridge": complex(B),
        "difference": diff,
        "status": "pass" if ok else "fail",
    }, args.out)
    return 0 if ok else 1


def _cmd_bound(args) -> int:
    ent = get_entry(args.entry)
    rep = checks_mod.check_thm_bound(ent)
    _emit({"entry": ent.name, "thm-bound": rep}, args.out)
    return 0 if rep["status"] != "fail" else 1


def _cmd_audit_poles(args) -> int:
    ent = get_entry(args.entry)
    rep = checks_mod.check_pole_audit(ent, q=args.prime)
    moi = checks_mod.check_moi(ent)
    _emit({"entry": ent.name, "pole-audit": rep, "moi": moi}, args.out)
    bad = rep["status"] == "fail" or moi["status"] == "fail"
    return 1 if bad else 0


def _cmd_decay(args) -> int:
    ent = get_entry(args.entry)
    rep = checks_mod.check_decay(ent, budget=args.budget)
    _emit({"entry": ent.name, "decay": rep}, args.out)
    return 0 if rep["status"] != "fail" else 1


def _cmd_charsum(args) -> int:
    rows = []
    p, c = args.prime, args.conductor
    ok = True
    for chi in characters(p, c):
        g = gauss_coefficient(chi)
        mag = abs(g.to_complex())
        rows.append({"e": chi.e, "order": chi.order,
                     "conductor": chi.conductor, "gauss_magnitude": float(mag)})
    expect = p ** (1 - c / 2) / (p - 1)
    for r in rows:
        if r["conductor"] == c and abs(r["gauss_magnitude"] - expect) > 1e-10:
            ok = False
    _emit({"p": p, "conductor": c, "expected_magnitude": expect,
           "characters": rows, "status": "pass" if ok else "fail"}, args.out)
    return 0 if ok else 1


def _cmd_langweil(args) -> int:
    rep = checks_mod.check_langweil()
    _emit(rep, args.out)
    return 0 if rep["status"] != "fail" else 1


def _parse_checks(spec):
    if spec is None:
        return None
    names = [s for s in spec.split(",") if s]
    known = set(checks_mod.ENTRY_CHECKS) | set(checks_mod.GLOBAL_CHECKS)
    for n in names:
        if n not in known:
            raise ValueError(f"unknown check {n!r}")
    return names


def _cmd_verify(args) -> int:
    ent = get_entry(args.entry)
    names = _parse_checks(args.checks)
    entry_names = None
    if names is not None:
        entry_names = [n for n in names if n in checks_mod.ENTRY_CHECKS]
    rep = checks_mod.run_entry(ent, checks=entry_names, budget=args.budget)
    failed = sorted(k for k, v in rep.items() if v["status"] == "fail")
    _emit({"entry": ent.name, "checks": rep, "failed": failed}, args.out)
    if failed:
        print("failed checks: " + ", ".join(failed), file=sys.stderr)
        return 1
    return 0


def _cmd_run_all(args) -> int:
    names = _parse_checks(args.checks)
    primes = None
    if args.primes:
        primes = tuple(int(p) for p in args.primes.split(","))
    t0 = time.monotonic()
    rep = checks_mod.run_all(checks=names, budget=args.budget,
                             threads=args.threads, primes=primes)
    _emit(rep, args.out)
    print(f"run-all finished in {time.monotonic() - t0:.1f}s", file=sys.stderr)
    return 0 if rep["all_passed"] else 1


def _cmd_list(args) -> int:
    rows = []
    for ent in load_catalog():
        pair = ent.lct_pair()
        rows.append({
            "name": ent.name,
            "display": ent.display,
            "n": ent.n,
            "sigma": ent.sigma,
            "lct": pair[0] if pair else None,
            "lct_Z": pair[1] if pair else None,
            "primes": list(ent.primes),
            "has_resolution": ent.resolution is not None,
        })
    _emit({"entries": rows}, args.out)
    return 0


_DISPATCH = {
    "expsum": _cmd_expsum,
    "zeta-emp": _cmd_zeta_emp,
    "zeta-denef": _cmd_zeta_denef,
    "bridge": _cmd_bridge,
    "bound": _cmd_bound,
    "audit-poles": _cmd_audit_poles,
    "decay": _cmd_decay,
    "charsum": _cmd_charsum,
    "langweil": _cmd_langweil,
    "verify": _cmd_verify,
    "run-all": _cmd_run_all,
    "list": _cmd_list,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _DISPATCH[args.cmd](args)
    except BudgetError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError, SyntaxError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
